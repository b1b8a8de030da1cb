#pragma once

// Online prediction diagnostics: distance functionals between predictive
// distributions, exact expectations over the full tree of histories, and the
// cumulative-error bounds for mixtures over finite classes.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "unilearn/semimeasure.hpp"

namespace unilearn::prediction {

enum class Functional { kSquared, kHellinger, kAbsolute, kRelativeEntropy };

const char* to_string(Functional f);
Functional parse_functional(const std::string& name);

/// d(rho(.|h), mu(.|h)). Relative entropy is sum_a mu ln(mu/rho) and is
/// +infinity when rho gives zero mass where mu does not.
double distance(Functional f, std::span<const double> rho, std::span<const double> mu);

/// Default cap on |X|^n for full-tree expectations.
inline constexpr double kMaxTreeLeaves = 1e6;

/// Evaluated at every history h with mu(h) > 0 and len(h) < n; receives h
/// and mu(.|h).
using NodeValue = std::function<double(SymbolView history, std::span<const double> mu_next)>;

/// Entry t-1 holds sum_{len(h)=t-1} mu(h) value(h). Subtrees are evaluated in
/// parallel and reduced in a fixed order.
std::vector<double> tree_expectation(const Semimeasure& mu, std::size_t n, const NodeValue& value,
                                     double max_leaves = kMaxTreeLeaves);

/// sum_{t<=n} sum_{x_{<t}} mu(x_{<t}) d(rho(.|x_{<t}), mu(.|x_{<t})), computed
/// exactly by walking every history of positive mu-mass. Throws CapExceeded
/// if |X|^n exceeds max_leaves.
double exact_cumulative_distance(const Semimeasure& rho, const Semimeasure& mu, std::size_t n, Functional f,
                                 double max_leaves = kMaxTreeLeaves);

/// The same sum split by t (entry t-1 holds step t), so prefixes give the
/// cumulative value at every horizon <= n.
std::vector<double> per_step_expected_distance(const Semimeasure& rho, const Semimeasure& mu, std::size_t n,
                                               Functional f, double max_leaves = kMaxTreeLeaves);

/// Number of t <= len(stream) with d(rho(.|x_{<t}), mu(.|x_{<t})) > eps on one path.
std::size_t deviation_count(const Semimeasure& rho, const Semimeasure& mu, SymbolView stream, Functional f,
                            double eps);

/// Exact mu-expectation of the deviation count over horizon n.
double expected_deviation_count(const Semimeasure& rho, const Semimeasure& mu, std::size_t n, Functional f,
                                double eps, double max_leaves = kMaxTreeLeaves);

/// rho(block | past) = rho(past block) / rho(past).
double multi_step_predictive(const Semimeasure& rho, SymbolView past, SymbolView block);

/// sum_t -ln rho(x_t | x_{<t}); +infinity when some step has probability 0.
double cumulative_log_error(const Semimeasure& rho, SymbolView stream);

/// sum_t |1 - rho(x_t | x_{<t})|.
double cumulative_absolute_error(const Semimeasure& rho, SymbolView stream);

struct BoundReport {
  std::string class_id;
  std::string mu_id;
  std::size_t horizon = 0;
  Functional functional = Functional::kSquared;
  double value = 0.0;   // exact cumulative expected distance
  double bound = 0.0;   // ln(1/w_mu)
  double margin = 0.0;  // bound - value
  bool holds() const { return margin >= -1e-9; }
};

/// Builds the report for member index mu_index of a weighted class mixture.
BoundReport bound_report(const std::string& class_id, const std::string& mu_id, const Semimeasure& mixture,
                         const Semimeasure& mu, double mu_weight, std::size_t n, Functional f);

void write_bound_csv_header(std::ostream& out);
void write_bound_csv_row(std::ostream& out, const BoundReport& r);

/// Shortest-round-trip decimal formatting used in every CSV/JSON output.
std::string format_double(double v);

}  // namespace unilearn::prediction
