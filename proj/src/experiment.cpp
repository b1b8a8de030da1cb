#include "unilearn/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "unilearn/agent.hpp"
#include "unilearn/bayes.hpp"
#include "unilearn/decision.hpp"
#include "unilearn/description.hpp"
#include "unilearn/det_learners.hpp"
#include "unilearn/monotone_vm.hpp"
#include "unilearn/prediction.hpp"
#include "unilearn/rng.hpp"
#include "unilearn/sideinfo.hpp"

namespace unilearn::experiment {

namespace {

using json = nlohmann::ordered_json;
using prediction::format_double;

const std::set<std::string> kKinds{"learn-det", "predict", "bounds", "decide", "classify", "approx-m", "agent"};

// ---------------------------------------------------------------- JSON I/O

void read_string(const json& j, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_string()) throw ConfigError(key, "expected a string");
  out = j[key].get<std::string>();
}

template <typename U>
void read_unsigned(const json& j, const char* key, U& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
  out = static_cast<U>(j[key].get<std::uint64_t>());
}

void read_int(const json& j, const char* key, int& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_integer()) throw ConfigError(key, "expected an integer");
  const auto v = j[key].get<std::int64_t>();
  if (v < -1'000'000'000 || v > 1'000'000'000) throw ConfigError(key, "integer out of range");
  out = static_cast<int>(v);
}

void read_double(const json& j, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number()) throw ConfigError(key, "expected a number");
  out = j[key].get<double>();
}

template <typename T, typename Check>
void read_array(const json& j, const char* key, std::vector<T>& out, Check&& check, const char* what) {
  if (!j.contains(key)) return;
  if (!j[key].is_array()) throw ConfigError(key, std::string("expected an array of ") + what);
  out.clear();
  for (const auto& e : j[key]) {
    if (!check(e)) throw ConfigError(key, std::string("expected an array of ") + what);
    out.push_back(e.template get<T>());
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = c.kind;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["models"] = c.models;
  j["weights"] = c.weights;
  j["weight_values"] = c.weight_values;
  j["truth"] = c.truth;
  j["horizon"] = c.horizon;
  j["learner"] = c.learner;
  j["family"] = c.family;
  j["family_size"] = c.family_size;
  j["family_param"] = c.family_param;
  j["functionals"] = c.functionals;
  j["eps"] = c.eps;
  j["loss"] = c.loss;
  j["random_losses"] = c.random_losses;
  j["decisions"] = c.decisions;
  j["side_stream"] = c.side_stream;
  j["stream"] = c.stream;
  j["stream_csv"] = c.stream_csv;
  j["bound_horizon"] = c.bound_horizon;
  j["alphabet"] = c.alphabet;
  j["lengths"] = c.lengths;
  j["steps"] = c.steps;
  j["max_string_length"] = c.max_string_length;
  j["samples"] = c.samples;
  j["environment"] = c.environment;
  j["observations"] = c.observations;
  j["reward_levels"] = c.reward_levels;
  j["planner"] = c.planner;
  j["horizon_mode"] = c.horizon_mode;
  j["cycles"] = c.cycles;
  return j;
}

ExperimentConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("(root)", "config must be a JSON object");
  static const std::set<std::string> known = [] {
    std::set<std::string> keys;
    const auto defaults = to_json(ExperimentConfig{});
    for (const auto& [k, v] : defaults.items()) keys.insert(k);
    return keys;
  }();
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) throw ConfigError(k, "unknown field");
  }
  ExperimentConfig c;
  auto is_string = [](const json& e) { return e.is_string(); };
  auto is_number = [](const json& e) { return e.is_number(); };
  auto is_unsigned = [](const json& e) { return e.is_number_unsigned(); };
  auto is_int = [](const json& e) { return e.is_number_integer(); };
  read_string(j, "kind", c.kind);
  read_string(j, "name", c.name);
  read_unsigned(j, "seed", c.seed);
  read_string(j, "output_dir", c.output_dir);
  read_array(j, "models", c.models, is_string, "strings");
  read_string(j, "weights", c.weights);
  read_array(j, "weight_values", c.weight_values, is_number, "numbers");
  read_string(j, "truth", c.truth);
  read_unsigned(j, "horizon", c.horizon);
  read_string(j, "learner", c.learner);
  read_string(j, "family", c.family);
  read_unsigned(j, "family_size", c.family_size);
  read_unsigned(j, "family_param", c.family_param);
  read_array(j, "functionals", c.functionals, is_string, "strings");
  read_double(j, "eps", c.eps);
  read_string(j, "loss", c.loss);
  read_unsigned(j, "random_losses", c.random_losses);
  read_int(j, "decisions", c.decisions);
  read_string(j, "side_stream", c.side_stream);
  read_string(j, "stream", c.stream);
  read_string(j, "stream_csv", c.stream_csv);
  read_unsigned(j, "bound_horizon", c.bound_horizon);
  read_int(j, "alphabet", c.alphabet);
  read_array(j, "lengths", c.lengths, is_int, "integers");
  read_array(j, "steps", c.steps, is_unsigned, "non-negative integers");
  read_unsigned(j, "max_string_length", c.max_string_length);
  read_unsigned(j, "samples", c.samples);
  read_string(j, "environment", c.environment);
  read_int(j, "observations", c.observations);
  read_int(j, "reward_levels", c.reward_levels);
  read_string(j, "planner", c.planner);
  read_string(j, "horizon_mode", c.horizon_mode);
  read_unsigned(j, "cycles", c.cycles);
  return c;
}

// ---------------------------------------------------------------- validation

std::vector<desc::ModelDescription> parse_models(const std::vector<std::string>& texts, const char* field) {
  std::vector<desc::ModelDescription> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      out.push_back(desc::parse_description(texts[i]));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string(field) + "[" + std::to_string(i) + "]", e.what());
    }
  }
  return out;
}

std::vector<std::string> generated_family(const ExperimentConfig& c) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= c.family_size; ++i) {
    if (c.family == "step") {
      out.push_back("step(" + std::to_string(i) + ")");
    } else if (c.family == "binexp") {
      out.push_back("binexp(" + std::to_string(i - 1) + ";" + std::to_string(c.family_param) + ")");
    } else if (c.family == "radix") {
      out.push_back("radix(" + std::to_string(i - 1) + ";" + std::to_string(c.family_param) + ")");
    }
  }
  return out;
}

std::vector<std::string> class_texts(const ExperimentConfig& c) {
  return c.family.empty() ? c.models : generated_family(c);
}

std::size_t truth_member(const ExperimentConfig& c, std::size_t class_size) {
  if (c.truth.rfind("member:", 0) != 0) return 0;
  std::size_t m = 0;
  try {
    m = std::stoul(c.truth.substr(7));
  } catch (const std::exception&) {
    throw ConfigError("truth", "'" + c.truth + "' is not member:<index>");
  }
  if (m < 1 || m > class_size) {
    throw ConfigError("truth", "member index " + std::to_string(m) + " outside 1.." + std::to_string(class_size));
  }
  return m;
}

void validate_weights(const ExperimentConfig& c, std::size_t class_size) {
  static const std::set<std::string> modes{"uniform", "universal", "index", "inverse_square", "explicit"};
  if (!modes.contains(c.weights)) {
    throw ConfigError("weights", "'" + c.weights + "' is not one of uniform, universal, index, inverse_square, explicit");
  }
  if (c.weights == "explicit") {
    if (c.weight_values.size() != class_size) {
      throw ConfigError("weight_values", "needs one weight per class member (" + std::to_string(class_size) + ")");
    }
    double total = 0.0;
    for (double w : c.weight_values) {
      if (!(w > 0.0)) throw ConfigError("weight_values", "weights must be strictly positive");
      total += w;
    }
    if (total > 1.0 + 1e-12) throw ConfigError("weight_values", "weights sum to more than 1");
  } else if (!c.weight_values.empty()) {
    throw ConfigError("weight_values", "only allowed with weights = explicit");
  }
}

std::vector<double> class_weights(const ExperimentConfig& c, const std::vector<desc::ModelDescription>& models) {
  if (c.weights == "uniform") return bayes::uniform_weights(models.size());
  if (c.weights == "universal") return desc::universal_weights(models);
  if (c.weights == "index") return desc::index_weights(models.size());
  if (c.weights == "inverse_square") {
    std::vector<double> w;
    for (std::size_t i = 1; i <= models.size(); ++i) w.push_back(det::inverse_square_weight(i));
    return w;
  }
  return c.weight_values;
}

void require_horizon(const ExperimentConfig& c) {
  if (c.horizon < 1) throw ConfigError("horizon", "must be >= 1");
}

void require_alphabet_agreement(const std::vector<desc::ModelDescription>& models) {
  for (std::size_t i = 1; i < models.size(); ++i) {
    if (models[i].alphabet != models[0].alphabet) {
      throw ConfigError("models[" + std::to_string(i) + "]", "alphabet differs from models[0]");
    }
  }
}

void require_class(const ExperimentConfig& c, const std::vector<desc::ModelDescription>& models, bool conditional_ok) {
  if (models.empty()) throw ConfigError("models", "the class needs at least one member");
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (!conditional_ok && desc::is_conditional(models[i])) {
      throw ConfigError("models[" + std::to_string(i) + "]", "conditional models need a side stream (use classify)");
    }
  }
  require_alphabet_agreement(models);
  validate_weights(c, models.size());
}

void check_stream_digits(const std::string& text, int alphabet, const char* field) {
  try {
    parse_symbols(text, alphabet);
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

void validate_config(const ExperimentConfig& c) {
  if (!kKinds.contains(c.kind)) {
    throw ConfigError("kind", "'" + c.kind + "' is not one of learn-det, predict, bounds, decide, classify, approx-m, agent");
  }
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  if (c.eps < 0.0 || !std::isfinite(c.eps)) throw ConfigError("eps", "must be a finite number >= 0");
  if (!c.family.empty() && c.kind != "learn-det") throw ConfigError("family", "only used by learn-det");

  if (c.kind == "learn-det") {
    static const std::set<std::string> learners{"enumeration", "majority", "weighted_majority"};
    if (!learners.contains(c.learner)) {
      throw ConfigError("learner", "'" + c.learner + "' is not one of enumeration, majority, weighted_majority");
    }
    if (!c.family.empty()) {
      if (c.family != "step" && c.family != "binexp" && c.family != "radix") {
        throw ConfigError("family", "'" + c.family + "' is not one of step, binexp, radix");
      }
      if (!c.models.empty()) throw ConfigError("models", "give either models or family, not both");
      if (c.family_size < 1) throw ConfigError("family_size", "must be >= 1");
      if (c.family == "binexp" && (c.family_param < 1 || c.family_param > 62 ||
                                   c.family_size > (std::uint64_t{1} << c.family_param))) {
        throw ConfigError("family_param", "binexp needs 1 <= bits <= 62 and family_size <= 2^bits");
      }
      if (c.family == "radix" && (c.family_param < 2 || c.family_param > 1'000'000)) {
        throw ConfigError("family_param", "radix needs an alphabet size >= 2");
      }
    }
    const auto models = parse_models(class_texts(c), "models");
    require_class(c, models, false);
    for (std::size_t i = 0; i < models.size(); ++i) {
      if (!desc::is_deterministic(models[i])) {
        throw ConfigError("models[" + std::to_string(i) + "]", "learn-det needs deterministic sequences");
      }
    }
    if (c.learner == "majority" && models[0].alphabet != 2) {
      throw ConfigError("learner", "the majority learner is defined for binary alphabets");
    }
    if (truth_member(c, models.size()) == 0) throw ConfigError("truth", "learn-det needs truth = member:<index>");
    require_horizon(c);
  } else if (c.kind == "predict" || c.kind == "bounds" || c.kind == "decide") {
    const auto models = parse_models(c.models, "models");
    require_class(c, models, false);
    require_horizon(c);
    if (!c.truth.empty() && truth_member(c, models.size()) == 0) {
      const auto t = parse_models({c.truth}, "truth");
      if (desc::is_conditional(t[0])) throw ConfigError("truth", "must be an unconditional model");
      if (t[0].alphabet != models[0].alphabet) throw ConfigError("truth", "alphabet differs from the class");
      if (c.kind != "predict") throw ConfigError("truth", "bounds and decide take truth = member:<index> or nothing");
    }
    if (c.kind == "predict") {
      if (c.truth.empty() && c.stream.empty()) throw ConfigError("truth", "predict needs a truth to sample or a stream");
      if (!c.stream.empty()) {
        check_stream_digits(c.stream, models[0].alphabet, "stream");
        if (c.stream.size() != c.horizon) throw ConfigError("stream", "length must equal horizon");
      }
    }
    if (c.kind == "bounds") {
      if (c.functionals.empty()) throw ConfigError("functionals", "needs at least one functional");
      for (const auto& f : c.functionals) {
        try {
          prediction::parse_functional(f);
        } catch (const Error& e) {
          throw ConfigError("functionals", e.what());
        }
      }
      if (std::pow(static_cast<double>(models[0].alphabet), static_cast<double>(c.horizon)) > prediction::kMaxTreeLeaves) {
        throw ConfigError("horizon", "|X|^horizon exceeds the exact-expectation cap of 1e6 histories");
      }
    }
    if (c.kind == "decide") {
      if (c.loss.empty() && c.random_losses == 0) throw ConfigError("loss", "give a loss grid or random_losses > 0");
      if (!c.loss.empty()) {
        try {
          const auto m = decision::LossMatrix::parse_grid(c.loss);
          if (m.observations() != models[0].alphabet) {
            throw ConfigError("loss", "needs one row per observed symbol (" + std::to_string(models[0].alphabet) + ")");
          }
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          throw ConfigError("loss", e.what());
        }
      }
      if (c.decisions < 1 || c.decisions > 64) throw ConfigError("decisions", "must be in 1..64");
      if (std::pow(static_cast<double>(models[0].alphabet), static_cast<double>(c.horizon)) > prediction::kMaxTreeLeaves) {
        throw ConfigError("horizon", "|X|^horizon exceeds the exact-expectation cap of 1e6 histories");
      }
    }
  } else if (c.kind == "classify") {
    const auto models = parse_models(c.models, "models");
    require_class(c, models, true);
    if (c.stream_csv.empty()) {
      if (c.stream.empty()) throw ConfigError("stream", "classify needs stream and side_stream, or stream_csv");
      if (c.side_stream.size() != c.stream.size()) throw ConfigError("side_stream", "length must equal stream length");
      check_stream_digits(c.stream, models[0].alphabet, "stream");
    } else if (!c.stream.empty() || !c.side_stream.empty()) {
      throw ConfigError("stream_csv", "give either stream_csv or inline streams, not both");
    }
    int side = 1;
    for (const auto& m : models) {
      if (desc::is_conditional(m)) side = m.side;
    }
    for (std::size_t i = 0; i < models.size(); ++i) {
      if (desc::is_conditional(models[i]) && models[i].side != side) {
        throw ConfigError("models[" + std::to_string(i) + "]", "side alphabet differs from the other members");
      }
    }
    if (!c.side_stream.empty()) {
      for (char ch : c.side_stream) {
        if (ch < '0' || ch - '0' >= side) {
          throw ConfigError("side_stream", "symbol outside the side alphabet of size " + std::to_string(side));
        }
      }
    }
    if (c.bound_horizon > 0) {
      if (c.functionals.empty()) throw ConfigError("functionals", "needs at least one functional");
      for (const auto& f : c.functionals) {
        try {
          prediction::parse_functional(f);
        } catch (const Error& e) {
          throw ConfigError("functionals", e.what());
        }
      }
      const double work = std::pow(static_cast<double>(side), static_cast<double>(c.bound_horizon)) *
                          std::pow(static_cast<double>(models[0].alphabet), static_cast<double>(c.bound_horizon));
      if (work > 1e8) throw ConfigError("bound_horizon", "|Y|^n * |X|^n exceeds 1e8");
    }
  } else if (c.kind == "approx-m") {
    if (c.alphabet < 2 || c.alphabet > 10) throw ConfigError("alphabet", "must be in 2..10");
    if (c.lengths.empty()) throw ConfigError("lengths", "needs at least one program length bound L");
    if (c.steps.empty()) throw ConfigError("steps", "needs at least one step budget T");
    for (int L : c.lengths) {
      if (L < 0 || L > 30) throw ConfigError("lengths", "program length bounds must lie in 0..30");
    }
    for (std::size_t T : c.steps) {
      if (T < 1 || T > 100'000) throw ConfigError("steps", "step budgets must lie in 1..100000");
    }
    if (c.max_string_length < 1 || c.max_string_length > 8) throw ConfigError("max_string_length", "must be in 1..8");
    if (c.samples > 100'000'000) throw ConfigError("samples", "must be <= 1e8");
  } else if (c.kind == "agent") {
    if (c.environment.empty()) throw ConfigError("environment", "agent needs an environment description");
    const auto env = parse_models({c.environment}, "environment")[0];
    if (!desc::is_conditional(env)) throw ConfigError("environment", "must be a conditional model (actions -> percepts)");
    try {
      const agent::PerceptSpace space(c.observations, c.reward_levels);
      if (space.size() != env.alphabet) {
        throw ConfigError("observations", "observations * reward_levels must equal the environment's percept count " +
                                              std::to_string(env.alphabet));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("observations", e.what());
    }
    if (c.planner != "mixture" && c.planner != "informed") {
      throw ConfigError("planner", "'" + c.planner + "' is not one of mixture, informed");
    }
    if (c.planner == "mixture") {
      const auto models = parse_models(c.models, "models");
      require_class(c, models, true);
      for (std::size_t i = 0; i < models.size(); ++i) {
        if (!desc::is_conditional(models[i]) || models[i].side != env.side || models[i].alphabet != env.alphabet) {
          throw ConfigError("models[" + std::to_string(i) + "]", "must be conditional with the environment's actions and percepts");
        }
      }
    }
    if (c.horizon_mode != "receding" && c.horizon_mode != "lifetime") {
      throw ConfigError("horizon_mode", "'" + c.horizon_mode + "' is not one of receding, lifetime");
    }
    if (c.horizon_mode == "receding") require_horizon(c);
    if (c.cycles < 1) throw ConfigError("cycles", "must be >= 1");
    const double branching = static_cast<double>(env.side) * env.alphabet;
    const double depth = static_cast<double>(c.horizon_mode == "receding" ? c.horizon : c.cycles);
    if (std::pow(branching, depth) > agent::kMaxPlanNodes) {
      throw ConfigError(c.horizon_mode == "receding" ? "horizon" : "cycles",
                        "planning tree (|Y||X|)^n exceeds the cap of 1e6 nodes");
    }
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(root)", std::string("not valid JSON: ") + e.what());
  }
  auto c = from_json(j);
  validate_config(c);
  return c;
}

std::string serialize_config(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& config) {
  // Where the outputs go is not part of the experiment.
  auto c = config;
  c.output_dir.clear();
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(serialize_config(c))));
  return buf;
}

namespace {

// ---------------------------------------------------------------- outputs

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Outputs {
 public:
  Outputs(std::filesystem::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream csv(const std::string& name, const std::string& header) {
    auto out = open(name);
    out << "# manifest=manifest.json config_hash=" << hash_ << "\n" << header << "\n";
    return out;
  }

  std::ofstream jsonl(const std::string& name) {
    auto out = open(name);
    json head;
    head["manifest"] = "manifest.json";
    head["config_hash"] = hash_;
    out << head.dump() << "\n";
    return out;
  }

  void write_json(const std::string& name, json body) {
    auto out = open(name);
    json doc;
    doc["manifest"] = "manifest.json";
    doc["config_hash"] = hash_;
    for (auto& [k, v] : body.items()) doc[k] = v;
    out << doc.dump(2) << "\n";
  }

  const std::vector<std::string>& names() const { return names_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    names_.push_back(name);
    return out;
  }

  std::filesystem::path dir_;
  std::string hash_;
  std::vector<std::string> names_;
};

void write_class_table(Outputs& out, const std::vector<desc::ModelDescription>& models,
                       const std::vector<double>& weights) {
  auto f = out.csv("class.csv", "member,description,weight,description_bits");
  for (std::size_t i = 0; i < models.size(); ++i) {
    f << "m" << (i + 1) << ',' << csv_field(desc::to_text(models[i])) << ',' << format_double(weights[i]) << ','
      << desc::description_length(models[i]) << '\n';
  }
}

SymbolString sample_stream(const Semimeasure& mu, std::size_t n, Rng& rng) {
  SymbolString x;
  for (std::size_t t = 0; t < n; ++t) {
    const auto p = mu.conditional(x);
    const double u = rng.uniform();
    double acc = 0.0;
    Symbol pick = 0;
    bool any = false;
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (p[a] <= 0.0) continue;
      pick = static_cast<Symbol>(a);
      any = true;
      acc += p[a];
      if (u < acc) break;
    }
    if (!any) throw ConditioningOnNull("sampling: the truth model has no continuation");
    x.push_back(pick);
  }
  return x;
}

std::shared_ptr<bayes::BayesMixture> make_mixture(const std::vector<desc::ModelDescription>& models,
                                                  const std::vector<double>& weights) {
  std::vector<SemimeasurePtr> members;
  for (const auto& m : models) members.push_back(desc::build_semimeasure(m));
  return std::make_shared<bayes::BayesMixture>(std::move(members), weights);
}

// ---------------------------------------------------------------- kinds

void run_learn_det(const ExperimentConfig& c, Outputs& out) {
  const auto models = parse_models(class_texts(c), "models");
  std::vector<SequencePtr> seqs;
  for (const auto& m : models) seqs.push_back(desc::build_sequence(m));
  const auto weights = class_weights(c, models);
  const det::HypothesisClass cls(seqs, weights);
  const std::size_t m = truth_member(c, models.size());
  const auto& truth = cls.at(m);

  det::LearnerTrace trace;
  double bound = 0.0;
  if (c.learner == "enumeration") {
    trace = det::enumeration_learner(cls, truth, c.horizon);
    bound = static_cast<double>(m - 1);
  } else if (c.learner == "majority") {
    trace = det::majority_learner(cls, truth, c.horizon);
    bound = std::floor(std::log2(static_cast<double>(cls.size())));
  } else {
    trace = det::weighted_majority_learner(cls, truth, c.horizon);
    bound = det::weighted_majority_bound(cls.weight(m), cls.alphabet().size());
  }
  auto f = out.csv("trace.csv",
                   "t,prediction,truth,error,consistent_before,consistent_after,weight_before,weight_after,selected");
  for (const auto& s : trace.steps) {
    f << s.t << ',' << s.prediction << ',' << s.truth << ',' << (s.error ? 1 : 0) << ',' << s.consistent_before << ','
      << s.consistent_after << ',' << format_double(s.weight_before) << ',' << format_double(s.weight_after) << ','
      << s.selected << '\n';
  }
  json summary;
  summary["learner"] = c.learner;
  summary["class_size"] = cls.size();
  summary["truth_member"] = m;
  summary["horizon"] = c.horizon;
  summary["errors"] = trace.errors;
  summary["error_bound"] = bound;
  summary["within_bound"] = static_cast<double>(trace.errors) <= bound + 1e-9;
  out.write_json("summary.json", summary);
}

void run_predict(const ExperimentConfig& c, Outputs& out) {
  const auto models = parse_models(c.models, "models");
  const auto weights = class_weights(c, models);
  const auto mix = make_mixture(models, weights);
  write_class_table(out, models, weights);

  const std::size_t m = truth_member(c, models.size());
  SemimeasurePtr truth;
  if (m > 0) {
    truth = mix->member_ptr(m - 1);
  } else if (!c.truth.empty()) {
    truth = desc::build_semimeasure(desc::parse_description(c.truth));
  }
  SymbolString x;
  if (!c.stream.empty()) {
    x = parse_symbols(c.stream, models[0].alphabet);
  } else {
    Rng rng = Rng(c.seed).split("predict");
    x = sample_stream(*truth, c.horizon, rng);
  }

  auto f = out.csv("predictions.csv", "t,symbol,p_mixture,p_truth,log_loss_mixture,log_loss_truth,posterior_truth");
  double loss_mix = 0.0;
  double loss_truth = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const SymbolView past(x.data(), t);
    const double pm = mix->conditional(past)[x[t]];
    loss_mix += -std::log(pm);
    f << (t + 1) << ',' << x[t] << ',' << format_double(pm) << ',';
    if (truth) {
      const double pt = truth->log_joint(past) == kNegInf ? 0.0 : truth->conditional(past)[x[t]];
      loss_truth += -std::log(pt);
      f << format_double(pt) << ',' << format_double(-std::log(pm)) << ',' << format_double(-std::log(pt)) << ',';
    } else {
      f << ",," << format_double(-std::log(pm)) << ",,";
    }
    if (m > 0) f << format_double(bayes::posterior(*mix, SymbolView(x.data(), t + 1))[m - 1]);
    f << '\n';
  }
  json summary;
  summary["stream"] = format_symbols(x);
  summary["log_loss_mixture"] = loss_mix;
  if (truth) summary["log_loss_truth"] = loss_truth;
  if (m > 0) {
    summary["log_loss_regret"] = loss_mix - loss_truth;
    summary["regret_bound"] = std::log(1.0 / weights[m - 1]);
  }
  out.write_json("summary.json", summary);
}

void run_bounds(const ExperimentConfig& c, Outputs& out) {
  const auto models = parse_models(c.models, "models");
  const auto weights = class_weights(c, models);
  const auto mix = make_mixture(models, weights);
  write_class_table(out, models, weights);
  const std::string class_id = c.name.empty() ? "class" : c.name;
  const std::size_t only = truth_member(c, models.size());

  auto f = out.csv("bounds.csv", "class_id,mu_id,n,functional,value,bound,margin,value_bits,bound_bits");
  std::ofstream dev;
  if (c.eps > 0.0) dev = out.csv("deviations.csv", "class_id,mu_id,n,functional,eps,expected_count,ceiling");
  bool all_hold = true;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (only != 0 && i + 1 != only) continue;
    const std::string mu_id = "m" + std::to_string(i + 1);
    const double bound = std::log(1.0 / weights[i]);
    for (const auto& name : c.functionals) {
      const auto fn = prediction::parse_functional(name);
      const auto per_step = prediction::per_step_expected_distance(*mix, mix->member(i), c.horizon, fn);
      double cum = 0.0;
      for (std::size_t n = 1; n <= c.horizon; ++n) {
        cum += per_step[n - 1];
        const double margin = bound - cum;
        // Absolute distance has no ln(1/w) bound; its margin is informational.
        if (fn != prediction::Functional::kAbsolute && margin < -1e-9) all_hold = false;
        f << csv_field(class_id) << ',' << mu_id << ',' << n << ',' << name << ',' << format_double(cum) << ','
          << format_double(bound) << ',' << format_double(margin) << ',' << format_double(cum / std::log(2.0)) << ','
          << format_double(bound / std::log(2.0)) << '\n';
      }
      if (c.eps > 0.0) {
        const double count = prediction::expected_deviation_count(*mix, mix->member(i), c.horizon, fn, c.eps);
        dev << csv_field(class_id) << ',' << mu_id << ',' << c.horizon << ',' << name << ',' << format_double(c.eps)
            << ',' << format_double(count) << ',' << format_double(bound / c.eps) << '\n';
      }
    }
  }
  json summary;
  summary["class_id"] = class_id;
  summary["horizon"] = c.horizon;
  summary["all_bounds_hold"] = all_hold;
  out.write_json("summary.json", summary);
}

void run_decide(const ExperimentConfig& c, Outputs& out) {
  const auto models = parse_models(c.models, "models");
  const auto weights = class_weights(c, models);
  const auto mix = make_mixture(models, weights);
  write_class_table(out, models, weights);
  const int k = models[0].alphabet;

  std::vector<std::pair<std::string, decision::LossMatrix>> matrices;
  if (!c.loss.empty()) matrices.emplace_back("given", decision::LossMatrix::parse_grid(c.loss));
  Rng rng = Rng(c.seed).split("losses");
  for (std::size_t i = 0; i < c.random_losses; ++i) {
    Rng sub = rng.split(static_cast<std::uint64_t>(i));
    matrices.emplace_back("random" + std::to_string(i + 1), decision::LossMatrix::random(sub, k, c.decisions));
  }
  {
    auto grids = out.jsonl("losses.jsonl");
    for (const auto& [id, m] : matrices) {
      json row;
      row["matrix_id"] = id;
      row["grid"] = m.to_grid();
      grids << row.dump() << '\n';
    }
  }

  const std::size_t only = truth_member(c, models.size());
  auto f = out.csv("regret.csv", "matrix_id,mu_id,n,loss_xi,loss_mu,regret,bound,margin,ratio_ceiling,holds");
  auto p = out.csv("pareto.csv", "matrix_id,challenger,mu_id,loss_challenger,loss_xi,violation");
  bool all_hold = true;
  bool any_violation = false;
  for (const auto& [id, loss] : matrices) {
    for (std::size_t i = 0; i < models.size(); ++i) {
      if (only != 0 && i + 1 != only) continue;
      const auto r = decision::regret_bound_check(*mix, i, loss, c.horizon);
      all_hold = all_hold && r.holds();
      f << id << ",m" << (i + 1) << ',' << c.horizon << ',' << format_double(r.loss_xi) << ','
        << format_double(r.loss_mu) << ',' << format_double(r.regret) << ',' << format_double(r.bound) << ','
        << format_double(r.margin) << ',' << format_double(r.ratio_ceiling) << ',' << (r.holds() ? 1 : 0) << '\n';
    }
    std::vector<decision::StrategyPtr> challengers;
    for (std::size_t i = 0; i < models.size(); ++i) {
      challengers.push_back(
          std::make_shared<decision::LambdaRho>(mix->member_ptr(i), loss, "lambda_m" + std::to_string(i + 1)));
    }
    for (int y = 0; y < loss.decisions(); ++y) {
      challengers.push_back(std::make_shared<decision::ConstantStrategy>(static_cast<std::size_t>(y)));
    }
    const auto report = decision::pareto_check(*mix, loss, c.horizon, challengers);
    any_violation = any_violation || report.violation_found;
    for (const auto& e : report.entries) {
      for (std::size_t i = 0; i < e.losses.size(); ++i) {
        p << id << ',' << e.challenger << ",m" << (i + 1) << ',' << format_double(e.losses[i]) << ','
          << format_double(report.lambda_xi_losses[i]) << ',' << (e.violation ? 1 : 0) << '\n';
      }
    }
  }
  json summary;
  summary["matrices"] = matrices.size();
  summary["horizon"] = c.horizon;
  summary["all_regret_bounds_hold"] = all_hold;
  summary["pareto_violation_found"] = any_violation;
  out.write_json("summary.json", summary);
}

std::pair<SymbolString, SymbolString> read_paired_csv(const std::string& path, int x_alphabet, int side) {
  std::ifstream in(path);
  if (!in) throw ConfigError("stream_csv", "cannot open '" + path + "'");
  SymbolString ys;
  SymbolString xs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("stream_csv", path + ":" + std::to_string(lineno) + ": expected 'y,x'");
    }
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    if (lineno == 1 && (a == "y" || a == "side")) continue;  // header
    try {
      const auto y = std::stoul(a);
      const auto x = std::stoul(b);
      if (y >= static_cast<unsigned long>(side) || x >= static_cast<unsigned long>(x_alphabet)) {
        throw ConfigError("stream_csv", path + ":" + std::to_string(lineno) + ": symbol outside its alphabet");
      }
      ys.push_back(static_cast<Symbol>(y));
      xs.push_back(static_cast<Symbol>(x));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("stream_csv", path + ":" + std::to_string(lineno) + ": expected two integers");
    }
  }
  return {ys, xs};
}

void run_classify(const ExperimentConfig& c, Outputs& out) {
  const auto models = parse_models(c.models, "models");
  const auto weights = class_weights(c, models);
  write_class_table(out, models, weights);
  int side = 1;
  for (const auto& m : models) {
    if (desc::is_conditional(m)) side = m.side;
  }
  std::vector<sideinfo::ChronologicalPtr> members;
  for (const auto& m : models) members.push_back(desc::build_chronological(m, side));
  const auto mix = std::make_shared<sideinfo::ConditionalMixture>(members, weights);

  SymbolString ys;
  SymbolString xs;
  if (!c.stream_csv.empty()) {
    std::tie(ys, xs) = read_paired_csv(c.stream_csv, models[0].alphabet, side);
  } else {
    xs = parse_symbols(c.stream, models[0].alphabet);
    for (char ch : c.side_stream) ys.push_back(static_cast<Symbol>(ch - '0'));
  }
  const auto trace = sideinfo::online_classify(*mix, ys, xs);
  {
    auto f = out.jsonl("trace.jsonl");
    for (const auto& s : trace.steps) {
      json row;
      row["t"] = s.t;
      row["y"] = s.side;
      row["x"] = s.observed;
      row["predictive"] = s.predictive;
      row["log_loss"] = std::isfinite(s.log_loss) ? json(s.log_loss) : json("inf");
      row["posterior"] = mix->posterior(SymbolView(xs.data(), s.t), SymbolView(ys.data(), s.t));
      f << row.dump() << '\n';
    }
  }
  json summary;
  summary["steps"] = trace.steps.size();
  summary["cumulative_log_loss"] =
      std::isfinite(trace.cumulative_log_loss) ? json(trace.cumulative_log_loss) : json("inf");
  if (c.bound_horizon > 0) {
    auto f = out.csv("side_bounds.csv", "mu_id,n,functional,streams,worst_value,worst_stream,bound,holds");
    bool all = true;
    for (std::size_t i = 0; i < models.size(); ++i) {
      for (const auto& name : c.functionals) {
        const auto fn = prediction::parse_functional(name);
        const auto r = sideinfo::side_bound_check(*mix, i, c.bound_horizon, fn);
        const bool counted = fn != prediction::Functional::kAbsolute;
        all = all && (r.holds || !counted);
        f << 'm' << (i + 1) << ',' << c.bound_horizon << ',' << name << ',' << r.streams << ','
          << format_double(r.worst_value) << ',' << format_symbols(r.worst_stream) << ',' << format_double(r.bound)
          << ',' << (r.holds ? 1 : 0) << '\n';
      }
    }
    summary["all_side_bounds_hold"] = all;
  }
  out.write_json("summary.json", summary);
}

void run_approx_m(const ExperimentConfig& c, Outputs& out) {
  vm::MachineConfig machine;
  machine.output_alphabet = Alphabet(c.alphabet);
  auto f = out.csv("approx_m.csv", "L,T,x,approx_M,neg_log2");
  auto k = out.csv("kraft.csv", "L,T,n,sum,holds");
  std::ofstream s;
  if (c.samples > 0) s = out.csv("sample_m.csv", "L,T,x,samples,estimate,standard_error,approx_M,z");
  Rng rng = Rng(c.seed).split("sample_M");
  bool kraft_ok = true;
  for (int L : c.lengths) {
    for (std::size_t T : c.steps) {
      const vm::Budget budget{L, T};
      for (std::size_t n = 1; n <= c.max_string_length; ++n) {
        const auto table = vm::approx_M_table(n, budget, machine);
        double sum = 0.0;
        std::size_t idx = 0;
        for_each_string(c.alphabet, n, [&](SymbolView x) {
          const double m = table[idx++];
          sum += m;
          f << L << ',' << T << ',' << format_symbols(x) << ',' << format_double(m) << ','
            << (m > 0.0 ? format_double(-std::log2(m)) : std::string("inf")) << '\n';
          if (c.samples > 0 && n == c.max_string_length) {
            Rng sub = rng.split(format_symbols(x) + "/" + std::to_string(L) + "/" + std::to_string(T));
            const auto est = vm::sample_M(x, c.samples, T, L, sub.next_u64(), machine);
            const double z = est.standard_error > 0.0 ? (est.estimate - m) / est.standard_error : 0.0;
            s << L << ',' << T << ',' << format_symbols(x) << ',' << est.samples << ',' << format_double(est.estimate)
              << ',' << format_double(est.standard_error) << ',' << format_double(m) << ',' << format_double(z)
              << '\n';
          }
        });
        const bool holds = sum <= 1.0 + 1e-12;
        kraft_ok = kraft_ok && holds;
        k << L << ',' << T << ',' << n << ',' << format_double(sum) << ',' << (holds ? 1 : 0) << '\n';
      }
    }
  }
  json summary;
  summary["machine_version"] = vm::kMachineVersion;
  summary["kraft_holds"] = kraft_ok;
  out.write_json("summary.json", summary);
}

void run_agent(const ExperimentConfig& c, Outputs& out) {
  const auto env_desc = desc::parse_description(c.environment);
  const auto env = desc::build_chronological(env_desc);
  const agent::PerceptSpace space(c.observations, c.reward_levels);
  agent::AgentSpec spec;
  spec.mode = c.horizon_mode == "lifetime" ? agent::HorizonMode::kLifetime : agent::HorizonMode::kReceding;
  spec.horizon = c.horizon;
  if (c.planner == "informed") {
    spec.model = env;
  } else {
    const auto models = parse_models(c.models, "models");
    const auto weights = class_weights(c, models);
    write_class_table(out, models, weights);
    std::vector<sideinfo::ChronologicalPtr> members;
    for (const auto& m : models) members.push_back(desc::build_chronological(m));
    auto mix = std::make_shared<sideinfo::ConditionalMixture>(members, weights);
    spec.model = mix;
    spec.posterior_of = mix;
  }
  const auto trace = agent::run_episode(*env, space, spec, c.cycles, Rng(c.seed).split("agent").seed());
  {
    auto f = out.jsonl("episode.jsonl");
    for (const auto& s : trace.steps) {
      json row;
      row["t"] = s.t;
      row["action"] = s.action;
      row["percept"] = s.percept;
      row["observation"] = s.observation;
      row["reward"] = s.reward;
      row["planned_value"] = s.planned_value;
      if (!s.posterior.empty()) row["posterior"] = s.posterior;
      f << row.dump() << '\n';
    }
  }
  json summary;
  summary["cycles"] = c.cycles;
  summary["total_reward"] = trace.total_reward;
  summary["mean_reward"] = trace.total_reward / static_cast<double>(c.cycles);
  out.write_json("summary.json", summary);
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.config_hash = config_hash(config);
  Outputs out(config.output_dir, result.config_hash);

  if (config.kind == "learn-det") {
    run_learn_det(config, out);
  } else if (config.kind == "predict") {
    run_predict(config, out);
  } else if (config.kind == "bounds") {
    run_bounds(config, out);
  } else if (config.kind == "decide") {
    run_decide(config, out);
  } else if (config.kind == "classify") {
    run_classify(config, out);
  } else if (config.kind == "approx-m") {
    run_approx_m(config, out);
  } else {
    run_agent(config, out);
  }

  result.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest;
  manifest["name"] = config.name;
  manifest["kind"] = config.kind;
  manifest["config_hash"] = result.config_hash;
  manifest["machine_version"] = vm::kMachineVersion;
  manifest["library_version"] = kLibraryVersion;
  manifest["seed"] = config.seed;
  manifest["outputs"] = out.names();
  manifest["config"] = to_json(config);
  manifest["wall_time_seconds"] = result.wall_time_seconds;
  {
    std::ofstream m(out.dir() / "manifest.json", std::ios::binary);
    if (!m) throw Error("cannot write manifest.json");
    m << manifest.dump(2) << "\n";
  }
  result.outputs = out.names();
  result.outputs.push_back("manifest.json");
  return result;
}

}  // namespace unilearn::experiment
