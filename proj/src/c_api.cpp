#include "unilearn/unilearn.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include "unilearn/bayes.hpp"
#include "unilearn/description.hpp"
#include "unilearn/experiment.hpp"
#include "unilearn/monotone_vm.hpp"
#include "unilearn/parallel.hpp"
#include "unilearn/prediction.hpp"

struct ul_model {
  unilearn::SemimeasurePtr model;
  std::shared_ptr<const unilearn::bayes::BayesMixture> mixture;  // set for mixtures
};

namespace {

thread_local std::string last_error;

template <typename Fn>
ul_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return UL_OK;
  } catch (const unilearn::experiment::ConfigError& e) {
    last_error = e.what();
    return UL_ERR_CONFIG;
  } catch (const unilearn::ConditioningOnNull& e) {
    last_error = e.what();
    return UL_ERR_CONDITIONING_ON_NULL;
  } catch (const unilearn::RealizabilityViolation& e) {
    last_error = e.what();
    return UL_ERR_REALIZABILITY;
  } catch (const unilearn::CapExceeded& e) {
    last_error = e.what();
    return UL_ERR_CAP_EXCEEDED;
  } catch (const unilearn::InvalidArgument& e) {
    last_error = e.what();
    return UL_ERR_INVALID_ARGUMENT;
  } catch (const std::filesystem::filesystem_error& e) {
    last_error = e.what();
    return UL_ERR_IO;
  } catch (const unilearn::Error& e) {
    last_error = e.what();
    return UL_ERR_IO;
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return UL_ERR_INTERNAL;
  } catch (...) {
    last_error = "internal error";
    return UL_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw unilearn::InvalidArgument(what);
}

unilearn::SymbolView view(const uint32_t* x, size_t len) {
  require(x != nullptr || len == 0, "null symbol buffer");
  return {x, len};
}

unilearn::vm::MachineConfig machine(int alphabet_size) {
  unilearn::vm::MachineConfig config;
  config.output_alphabet = unilearn::Alphabet(alphabet_size);
  return config;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* ul_last_error(void) { return last_error.c_str(); }

const char* ul_status_name(ul_status status) {
  switch (status) {
    case UL_OK:
      return "ok";
    case UL_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case UL_ERR_CONDITIONING_ON_NULL:
      return "conditioning on null";
    case UL_ERR_REALIZABILITY:
      return "realizability violation";
    case UL_ERR_CAP_EXCEEDED:
      return "cap exceeded";
    case UL_ERR_CONFIG:
      return "invalid config";
    case UL_ERR_IO:
      return "i/o error";
    case UL_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* ul_version(void) { return unilearn::experiment::kLibraryVersion; }

const char* ul_machine_version(void) { return unilearn::vm::kMachineVersion; }

ul_status ul_set_workers(int workers) {
  return guarded([&] {
    require(workers >= 0, "worker count must be >= 0");
    unilearn::set_default_workers(workers);
  });
}

ul_status ul_model_parse(const char* description, ul_model** out) {
  return guarded([&] {
    require(description != nullptr && out != nullptr, "null argument");
    auto m = std::make_unique<ul_model>();
    m->model = unilearn::desc::build_semimeasure(unilearn::desc::parse_description(description));
    *out = m.release();
  });
}

ul_status ul_mixture_create(const ul_model* const* members, const double* weights, size_t count, ul_model** out) {
  return guarded([&] {
    require(members != nullptr && out != nullptr && count > 0, "mixture needs at least one member");
    std::vector<unilearn::SemimeasurePtr> ms;
    for (size_t i = 0; i < count; ++i) {
      require(members[i] != nullptr, "null mixture member");
      ms.push_back(members[i]->model);
    }
    std::vector<double> w = weights != nullptr ? std::vector<double>(weights, weights + count)
                                               : unilearn::bayes::uniform_weights(count);
    auto m = std::make_unique<ul_model>();
    m->mixture = std::make_shared<unilearn::bayes::BayesMixture>(std::move(ms), std::move(w));
    m->model = m->mixture;
    *out = m.release();
  });
}

void ul_model_free(ul_model* model) { delete model; }

ul_status ul_model_alphabet_size(const ul_model* model, int* out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = model->model->alphabet().size();
  });
}

ul_status ul_model_log_joint(const ul_model* model, const uint32_t* x, size_t len, double* out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = model->model->log_joint(view(x, len));
  });
}

ul_status ul_model_predictive(const ul_model* model, const uint32_t* x, size_t len, uint32_t a, double* out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = unilearn::predictive(*model->model, view(x, len), a);
  });
}

ul_status ul_mixture_posterior(const ul_model* mixture, const uint32_t* x, size_t len, double* out, size_t capacity,
                               size_t* count) {
  return guarded([&] {
    require(mixture != nullptr && count != nullptr, "null argument");
    require(mixture->mixture != nullptr, "model is not a mixture");
    const auto post = unilearn::bayes::posterior(*mixture->mixture, view(x, len));
    *count = post.size();
    require(out != nullptr || capacity == 0, "null output buffer");
    for (size_t i = 0; i < post.size() && i < capacity; ++i) out[i] = post[i];
  });
}

ul_status ul_description_length(const char* description, size_t* out) {
  return guarded([&] {
    require(description != nullptr && out != nullptr, "null argument");
    *out = unilearn::desc::description_length(unilearn::desc::parse_description(description));
  });
}

ul_status ul_exact_cumulative_distance(const ul_model* rho, const ul_model* mu, size_t n, const char* functional,
                                       double* out) {
  return guarded([&] {
    require(rho != nullptr && mu != nullptr && functional != nullptr && out != nullptr, "null argument");
    *out = unilearn::prediction::exact_cumulative_distance(*rho->model, *mu->model, n,
                                                           unilearn::prediction::parse_functional(functional));
  });
}

ul_status ul_vm_run(const char* program_bits, size_t step_budget, size_t max_output, int alphabet_size, uint32_t* out,
                    size_t capacity, size_t* out_len, ul_run_status* status, size_t* steps) {
  return guarded([&] {
    require(program_bits != nullptr && out_len != nullptr && status != nullptr, "null argument");
    const auto bits = unilearn::vm::parse_bits(program_bits);
    const auto r = unilearn::vm::run_program(bits, step_budget, max_output, machine(alphabet_size));
    *out_len = r.output.size();
    require(out != nullptr || capacity == 0, "null output buffer");
    for (size_t i = 0; i < r.output.size() && i < capacity; ++i) out[i] = r.output[i];
    *status = static_cast<ul_run_status>(static_cast<int>(r.status));
    if (steps != nullptr) *steps = r.steps;
  });
}

ul_status ul_approx_m(const uint32_t* x, size_t len, int alphabet_size, int max_len, size_t step_budget, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = unilearn::vm::approx_M(view(x, len), {max_len, step_budget}, machine(alphabet_size));
  });
}

ul_status ul_approx_km(const uint32_t* x, size_t len, int alphabet_size, int max_len, size_t step_budget, int* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto k = unilearn::vm::approx_Km(view(x, len), {max_len, step_budget}, machine(alphabet_size));
    *out = k ? *k : -1;
  });
}

ul_status ul_approx_k(const uint32_t* x, size_t len, int alphabet_size, int max_len, size_t step_budget, int* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto k = unilearn::vm::approx_K(view(x, len), {max_len, step_budget}, machine(alphabet_size));
    *out = k ? *k : -1;
  });
}

ul_status ul_sample_m(const uint32_t* x, size_t len, int alphabet_size, uint64_t samples, size_t step_budget,
                      int max_len, uint64_t seed, double* estimate, double* standard_error) {
  return guarded([&] {
    require(estimate != nullptr, "null argument");
    const auto r =
        unilearn::vm::sample_M(view(x, len), samples, step_budget, max_len, seed, machine(alphabet_size));
    *estimate = r.estimate;
    if (standard_error != nullptr) *standard_error = r.standard_error;
  });
}

ul_status ul_config_validate(const char* json_config, char* field, size_t field_capacity) {
  if (field != nullptr && field_capacity > 0) field[0] = '\0';
  try {
    require(json_config != nullptr, "null config");
    unilearn::experiment::parse_config(json_config);
    last_error.clear();
    return UL_OK;
  } catch (const unilearn::experiment::ConfigError& e) {
    last_error = e.what();
    if (field != nullptr && field_capacity > 0) {
      std::strncpy(field, e.field().c_str(), field_capacity - 1);
      field[field_capacity - 1] = '\0';
    }
    return UL_ERR_CONFIG;
  } catch (...) {
    return guarded([] { throw; });
  }
}

ul_status ul_config_canonical(const char* json_config, char** out) {
  return guarded([&] {
    require(json_config != nullptr && out != nullptr, "null argument");
    *out = copy_string(unilearn::experiment::serialize_config(unilearn::experiment::parse_config(json_config)));
  });
}

ul_status ul_experiment_run(const char* json_config, char** manifest_path) {
  return guarded([&] {
    require(json_config != nullptr, "null config");
    const auto config = unilearn::experiment::parse_config(json_config);
    unilearn::experiment::run(config);
    if (manifest_path != nullptr) {
      *manifest_path = copy_string((std::filesystem::path(config.output_dir) / "manifest.json").string());
    }
  });
}

void ul_string_free(char* s) { std::free(s); }

}  // extern "C"
