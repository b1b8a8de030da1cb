#ifndef UNILEARN_H
#define UNILEARN_H

/* C interface to libunilearn. Every function returns a ul_status; on failure
 * ul_last_error() describes the problem (per thread, valid until the next
 * call on that thread). Handles are opaque and owned by the caller. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UL_API __declspec(dllexport)
#else
#define UL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ul_status {
  UL_OK = 0,
  UL_ERR_INVALID_ARGUMENT = 1,
  UL_ERR_CONDITIONING_ON_NULL = 2,
  UL_ERR_REALIZABILITY = 3,
  UL_ERR_CAP_EXCEEDED = 4,
  UL_ERR_CONFIG = 5,
  UL_ERR_IO = 6,
  UL_ERR_INTERNAL = 7
} ul_status;

typedef enum ul_run_status {
  UL_RUN_RUNNING = 0,
  UL_RUN_HALTED = 1,
  UL_RUN_NEEDS_INPUT = 2,
  UL_RUN_INVALID = 3
} ul_run_status;

typedef struct ul_model ul_model;

UL_API const char* ul_last_error(void);
UL_API const char* ul_status_name(ul_status status);
UL_API const char* ul_version(void);
UL_API const char* ul_machine_version(void);

/* 0 restores the default (UNILEARN_WORKERS or the hardware concurrency). */
UL_API ul_status ul_set_workers(int workers);

/* Models ---------------------------------------------------------------- */

/* From the model-description language, e.g. "bernoulli(1/3)". */
UL_API ul_status ul_model_parse(const char* description, ul_model** out);
/* sum_i weights[i] * members[i]; weights == NULL means uniform. The members
 * stay owned by the caller and may be freed afterwards. */
UL_API ul_status ul_mixture_create(const ul_model* const* members, const double* weights, size_t count,
                                   ul_model** out);
UL_API void ul_model_free(ul_model* model);

UL_API ul_status ul_model_alphabet_size(const ul_model* model, int* out);
UL_API ul_status ul_model_log_joint(const ul_model* model, const uint32_t* x, size_t len, double* out);
/* rho(a | x). */
UL_API ul_status ul_model_predictive(const ul_model* model, const uint32_t* x, size_t len, uint32_t a, double* out);
/* Posterior over the members of a mixture after x; `out` holds `capacity`
 * doubles and *count receives the number of members. */
UL_API ul_status ul_mixture_posterior(const ul_model* mixture, const uint32_t* x, size_t len, double* out,
                                      size_t capacity, size_t* count);
/* Bits of the prefix-free serialization of a parsed description. */
UL_API ul_status ul_description_length(const char* description, size_t* out);

/* Exact sum_{t<=n} E_mu[d(rho(.|x_<t), mu(.|x_<t))]; functional is one of
 * "squared", "hellinger", "absolute", "relative_entropy". */
UL_API ul_status ul_exact_cumulative_distance(const ul_model* rho, const ul_model* mu, size_t n,
                                              const char* functional, double* out);

/* Reference machine ------------------------------------------------------ */

/* Runs a program given as '0'/'1' characters. `out` receives up to
 * `capacity` output symbols; *out_len the number produced. */
UL_API ul_status ul_vm_run(const char* program_bits, size_t step_budget, size_t max_output, int alphabet_size,
                           uint32_t* out, size_t capacity, size_t* out_len, ul_run_status* status,
                           size_t* steps);

UL_API ul_status ul_approx_m(const uint32_t* x, size_t len, int alphabet_size, int max_len, size_t step_budget,
                             double* out);
/* *out = -1 when no program within the budget qualifies. */
UL_API ul_status ul_approx_km(const uint32_t* x, size_t len, int alphabet_size, int max_len, size_t step_budget,
                              int* out);
UL_API ul_status ul_approx_k(const uint32_t* x, size_t len, int alphabet_size, int max_len, size_t step_budget,
                             int* out);
/* max_len < 0: no program-length cap. */
UL_API ul_status ul_sample_m(const uint32_t* x, size_t len, int alphabet_size, uint64_t samples, size_t step_budget,
                             int max_len, uint64_t seed, double* estimate, double* standard_error);

/* Experiments ------------------------------------------------------------ */

/* Validates a JSON config. On UL_ERR_CONFIG the offending field name is
 * copied (NUL-terminated, truncated to field_capacity) into `field`. */
UL_API ul_status ul_config_validate(const char* json_config, char* field, size_t field_capacity);
/* Canonical serialization; *out must be released with ul_string_free. */
UL_API ul_status ul_config_canonical(const char* json_config, char** out);
/* Runs an experiment and writes its outputs and manifest. */
UL_API ul_status ul_experiment_run(const char* json_config, char** manifest_path);
UL_API void ul_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* UNILEARN_H */
