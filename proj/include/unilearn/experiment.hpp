#pragma once

// Experiment configs and the batch runner behind the CLI.
//
// A config is a JSON object; every field has a default, and parse ->
// serialize -> parse is the identity. Outputs go to output_dir together with
// manifest.json. CSV outputs start with a "# manifest=..." line and JSON-lines
// outputs with a {"manifest": ...} record, so every file names the run that
// produced it.

#include <cstdint>
#include <string>
#include <vector>

#include "unilearn/core.hpp"

namespace unilearn::experiment {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// A config problem; field() names the offending JSON field.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string field, const std::string& reason)
      : InvalidArgument("config field '" + field + "': " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string kind;  // learn-det | predict | bounds | decide | classify | approx-m | agent
  std::string name;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  // Hypothesis class, in the model-description language.
  std::vector<std::string> models;
  std::string weights = "uniform";  // uniform | universal | index | inverse_square | explicit
  std::vector<double> weight_values;
  std::string truth;  // "member:K" (1-based) or a description; empty = every member in turn
  std::size_t horizon = 0;

  // learn-det: a generated family replaces `models` when set.
  std::string learner = "weighted_majority";  // enumeration | majority | weighted_majority
  std::string family;                         // "" | step | binexp | radix
  std::size_t family_size = 0;
  std::uint64_t family_param = 0;             // binexp: bits; radix: alphabet size

  // bounds
  std::vector<std::string> functionals{"squared", "relative_entropy"};
  double eps = 0.0;  // > 0 adds expected deviation counts

  // decide
  std::string loss;               // grid text; empty with random_losses > 0
  std::size_t random_losses = 0;
  int decisions = 2;              // columns of random loss matrices

  // classify / predict streams, digits; empty x in predict means "sample from truth"
  std::string side_stream;
  std::string stream;
  std::string stream_csv;         // two-column (y, x) file for classify
  std::size_t bound_horizon = 0;  // classify: exhaustive per-y bound check

  // approx-m
  int alphabet = 2;
  std::vector<int> lengths;
  std::vector<std::size_t> steps;
  std::size_t max_string_length = 3;
  std::uint64_t samples = 0;

  // agent
  std::string environment;
  int observations = 2;
  int reward_levels = 2;
  std::string planner = "mixture";  // mixture | informed
  std::string horizon_mode = "receding";
  std::size_t cycles = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates; throws ConfigError naming the field.
ExperimentConfig parse_config(const std::string& json_text);
/// Canonical JSON text (every field, fixed order).
std::string serialize_config(const ExperimentConfig& config);
void validate_config(const ExperimentConfig& config);

/// FNV-1a of the canonical serialization without output_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct RunResult {
  std::vector<std::string> outputs;  // file names inside output_dir, manifest last
  std::string config_hash;
  double wall_time_seconds = 0.0;
};

RunResult run(const ExperimentConfig& config);

}  // namespace unilearn::experiment
