// unilearn: command-line front end. Builds an experiment config from an
// optional JSON file plus flag overrides and hands it to the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unilearn/unilearn.h"

namespace {

using json = nlohmann::ordered_json;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> name;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> horizon;
  std::vector<std::string> models;
  std::optional<std::string> weights;
  std::vector<double> weight_values;
  std::optional<std::string> truth;
  std::optional<std::string> learner;
  std::optional<std::string> family;
  std::optional<std::uint64_t> family_size;
  std::optional<std::uint64_t> family_param;
  std::vector<std::string> functionals;
  std::optional<double> eps;
  std::optional<std::string> loss_file;
  std::optional<std::uint64_t> random_losses;
  std::optional<int> decisions;
  std::optional<std::string> side_stream;
  std::optional<std::string> stream;
  std::optional<std::string> stream_csv;
  std::optional<std::uint64_t> bound_horizon;
  std::optional<int> alphabet;
  std::vector<int> lengths;
  std::vector<std::uint64_t> steps;
  std::optional<std::uint64_t> max_string_length;
  std::optional<std::uint64_t> samples;
  std::optional<std::string> environment;
  std::optional<int> observations;
  std::optional<int> reward_levels;
  std::optional<std::string> planner;
  std::optional<std::string> horizon_mode;
  std::optional<std::uint64_t> cycles;
  std::vector<std::string> sets;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON experiment config (flags override its fields)");
  cmd->add_option("-o,--out", o.out, "output directory");
  cmd->add_option("--name", o.name, "experiment name");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("-n,--horizon", o.horizon, "horizon n (planning horizon for agent)");
  cmd->add_option("-m,--model", o.models, "class member in the model-description language (repeatable)");
  cmd->add_option("--weights", o.weights, "uniform | universal | index | inverse_square | explicit");
  cmd->add_option("--weight", o.weight_values, "explicit prior weight (repeatable, implies --weights explicit)");
  cmd->add_option("--truth", o.truth, "member:K or a model description");
  cmd->add_option("--set", o.sets, "override any config field: key=value, value parsed as JSON if possible");
  cmd->add_option("-j,--workers", o.workers, "worker threads (default: UNILEARN_WORKERS or all cores)");
}

json load_config(const Overrides& o, const std::string& kind) {
  json j = json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config '" + o.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    j = json::parse(ss.str());
  }
  if (!kind.empty()) j["kind"] = kind;
  auto put = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("output_dir", o.out);
  put("name", o.name);
  put("seed", o.seed);
  put("horizon", o.horizon);
  if (!o.models.empty()) j["models"] = o.models;
  put("weights", o.weights);
  if (!o.weight_values.empty()) {
    j["weights"] = "explicit";
    j["weight_values"] = o.weight_values;
  }
  put("truth", o.truth);
  put("learner", o.learner);
  put("family", o.family);
  put("family_size", o.family_size);
  put("family_param", o.family_param);
  if (!o.functionals.empty()) j["functionals"] = o.functionals;
  put("eps", o.eps);
  if (o.loss_file) {
    std::ifstream in(*o.loss_file);
    if (!in) throw std::runtime_error("cannot open loss grid '" + *o.loss_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    j["loss"] = ss.str();
  }
  put("random_losses", o.random_losses);
  put("decisions", o.decisions);
  put("side_stream", o.side_stream);
  put("stream", o.stream);
  put("stream_csv", o.stream_csv);
  put("bound_horizon", o.bound_horizon);
  put("alphabet", o.alphabet);
  if (!o.lengths.empty()) j["lengths"] = o.lengths;
  if (!o.steps.empty()) j["steps"] = o.steps;
  put("max_string_length", o.max_string_length);
  put("samples", o.samples);
  put("environment", o.environment);
  put("observations", o.observations);
  put("reward_levels", o.reward_levels);
  put("planner", o.planner);
  put("horizon_mode", o.horizon_mode);
  put("cycles", o.cycles);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw std::runtime_error("--set expects key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    const std::string value = s.substr(eq + 1);
    try {
      j[key] = json::parse(value);
    } catch (const json::parse_error&) {
      j[key] = value;
    }
  }
  return j;
}

int fail(ul_status status) {
  std::fprintf(stderr, "unilearn: %s: %s\n", ul_status_name(status), ul_last_error());
  return status == UL_ERR_CONFIG ? 2 : 1;
}

int execute(const Overrides& o, const std::string& kind, bool validate_only, bool print_config) {
  if (o.workers) {
    if (const auto st = ul_set_workers(*o.workers); st != UL_OK) return fail(st);
  }
  const std::string text = load_config(o, kind).dump();
  if (validate_only) {
    char field[128];
    const auto st = ul_config_validate(text.c_str(), field, sizeof(field));
    if (st != UL_OK) return fail(st);
    std::printf("config ok\n");
    return 0;
  }
  if (print_config) {
    char* canonical = nullptr;
    const auto st = ul_config_canonical(text.c_str(), &canonical);
    if (st != UL_OK) return fail(st);
    std::fputs(canonical, stdout);
    ul_string_free(canonical);
    return 0;
  }
  char* manifest = nullptr;
  const auto st = ul_experiment_run(text.c_str(), &manifest);
  if (st != UL_OK) return fail(st);
  std::printf("%s\n", manifest);
  ul_string_free(manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unilearn: universal-learning workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ul_version()) + " / " + ul_machine_version());

  Overrides o;
  bool print_config = false;

  auto* run = app.add_subcommand("run", "run the experiment described by --config");
  add_common(run, o);
  run->add_flag("--print-config", print_config, "print the canonical config instead of running");
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  add_common(validate, o);

  auto* learn = app.add_subcommand("learn-det", "deterministic online learners");
  add_common(learn, o);
  learn->add_option("--learner", o.learner, "enumeration | majority | weighted_majority");
  learn->add_option("--family", o.family, "generated class: step | binexp | radix");
  learn->add_option("--family-size", o.family_size, "members of the generated class");
  learn->add_option("--family-param", o.family_param, "binexp: bits; radix: alphabet size");

  auto* predict = app.add_subcommand("predict", "online Bayes-mixture prediction on one stream");
  add_common(predict, o);
  predict->add_option("--stream", o.stream, "observed stream as digits (default: sampled from --truth)");

  auto* bounds = app.add_subcommand("bounds", "exact cumulative-distance bounds for a finite class");
  add_common(bounds, o);
  bounds->add_option("-f,--functional", o.functionals, "squared | hellinger | absolute | relative_entropy");
  bounds->add_option("--eps", o.eps, "also report expected deviation counts above eps");

  auto* decide = app.add_subcommand("decide", "Lambda_rho decisions, regret bound and Pareto check");
  add_common(decide, o);
  decide->add_option("--loss-file", o.loss_file, "loss grid, one row per observed symbol");
  decide->add_option("--random-losses", o.random_losses, "number of seeded random loss matrices");
  decide->add_option("--decisions", o.decisions, "columns of the random loss matrices");

  auto* classify = app.add_subcommand("classify", "prediction with side information");
  add_common(classify, o);
  classify->add_option("--y", o.side_stream, "side stream as digits");
  classify->add_option("--x", o.stream, "observed stream as digits");
  classify->add_option("--stream-csv", o.stream_csv, "two-column (y,x) CSV instead of --y/--x");
  classify->add_option("--bound-horizon", o.bound_horizon, "exhaustive per-y bound check horizon");
  classify->add_option("-f,--functional", o.functionals, "functionals for the bound check");

  auto* approx = app.add_subcommand("approx-m", "enumerate the reference machine: approx_M, Kraft sums");
  add_common(approx, o);
  approx->add_option("--alphabet", o.alphabet, "output alphabet size");
  approx->add_option("-L,--max-len", o.lengths, "program length bound (repeatable)");
  approx->add_option("-T,--steps", o.steps, "step budget (repeatable)");
  approx->add_option("--max-length", o.max_string_length, "longest target string");
  approx->add_option("--samples", o.samples, "also estimate M by sampling random programs");

  auto* agent = app.add_subcommand("agent", "expectimax agent episode");
  add_common(agent, o);
  agent->add_option("--environment", o.environment, "conditional model of percepts given actions");
  agent->add_option("--observations", o.observations, "observation count");
  agent->add_option("--reward-levels", o.reward_levels, "reward grid size");
  agent->add_option("--planner", o.planner, "mixture | informed");
  agent->add_option("--horizon-mode", o.horizon_mode, "receding | lifetime");
  agent->add_option("--cycles", o.cycles, "episode length");

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* cmd : app.get_subcommands()) {
      const std::string name = cmd->get_name();
      if (name == "run") return execute(o, "", false, print_config);
      if (name == "validate") return execute(o, "", true, false);
      return execute(o, name, false, false);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unilearn: %s\n", e.what());
    return 2;
  }
  return 0;
}
