#pragma once

// Loss-based sequential decisions: the rho-Bayes-optimal strategy Lambda_rho,
// exact cumulative expected losses, the regret bound for mixtures and an
// admissibility diagnostic.

#include <memory>
#include <string>
#include <vector>

#include "unilearn/bayes.hpp"
#include "unilearn/prediction.hpp"
#include "unilearn/rng.hpp"

namespace unilearn::decision {

/// loss(x, y) in [0,1] for observed symbol x and decision y.
class LossMatrix {
 public:
  explicit LossMatrix(std::vector<std::vector<double>> rows, std::vector<std::string> decision_labels = {});

  /// One row per observed symbol, entries separated by whitespace or commas.
  /// Lines starting with '#' are comments. An optional first line
  /// "decisions: a b c" names the columns.
  static LossMatrix parse_grid(const std::string& text);
  std::string to_grid() const;

  static LossMatrix zero_one(int size);
  /// Entries uniform on [0,1], rounded to multiples of 1/1024 so the grid
  /// text form round-trips exactly.
  static LossMatrix random(Rng& rng, int observations, int decisions);

  int observations() const { return static_cast<int>(rows_.size()); }
  int decisions() const { return static_cast<int>(rows_.front().size()); }
  double at(Symbol x, std::size_t y) const { return rows_.at(x).at(y); }
  const std::vector<std::string>& decision_labels() const { return labels_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  std::vector<std::vector<double>> rows_;
  std::vector<std::string> labels_;
};

/// argmin_y sum_x p[x] loss(x, y), ties toward the smallest y.
std::size_t bayes_decision(std::span<const double> p, const LossMatrix& loss);

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::size_t decide(SymbolView history) const = 0;
  virtual std::string name() const = 0;
};

using StrategyPtr = std::shared_ptr<const Strategy>;

/// Lambda_rho: the decision minimizing rho-expected instantaneous loss.
class LambdaRho final : public Strategy {
 public:
  LambdaRho(SemimeasurePtr rho, LossMatrix loss, std::string label = "lambda");

  std::size_t decide(SymbolView history) const override;
  std::string name() const override { return label_; }

  /// sum_x rho(x | history) loss(x, y) for every y.
  std::vector<double> expected_losses(SymbolView history) const;

 private:
  SemimeasurePtr rho_;
  LossMatrix loss_;
  std::string label_;
};

class ConstantStrategy final : public Strategy {
 public:
  explicit ConstantStrategy(std::size_t decision) : decision_(decision) {}
  std::size_t decide(SymbolView) const override { return decision_; }
  std::string name() const override { return "constant:" + std::to_string(decision_); }

 private:
  std::size_t decision_;
};

/// Decisions listed for every history of length < n in shortlex order:
/// index(h) = (|X|^len(h) - 1)/(|X| - 1) + rank of h among strings of its length.
class TableStrategy final : public Strategy {
 public:
  TableStrategy(int alphabet_size, std::vector<std::size_t> table, std::string label = "table");

  std::size_t decide(SymbolView history) const override;
  std::string name() const override { return label_; }

  static std::size_t history_index(int alphabet_size, SymbolView history);

 private:
  int alphabet_size_;
  std::vector<std::size_t> table_;
  std::string label_;
};

/// sum_{t<=n} E_mu[loss(x_t, strategy(x_{<t}))], exact over the history tree.
double exact_cumulative_loss(const Strategy& strategy, const Semimeasure& mu, const LossMatrix& loss, std::size_t n,
                             double max_leaves = prediction::kMaxTreeLeaves);

struct RegretReport {
  double loss_xi = 0.0;
  double loss_mu = 0.0;
  double regret = 0.0;        // sqrt(loss_xi) - sqrt(loss_mu)
  double bound = 0.0;         // sqrt(2 ln(1/w_mu))
  double margin = 0.0;        // bound - regret
  double ratio_ceiling = 0.0; // (sqrt(loss_mu) + bound)^2
  bool holds(double tol = 1e-9) const { return margin >= -tol && loss_xi <= ratio_ceiling + tol; }
};

/// Compares Lambda_xi (xi = the class mixture) against Lambda_mu for member mu_index.
RegretReport regret_bound_check(const bayes::BayesMixture& cls, std::size_t mu_index, const LossMatrix& loss,
                                std::size_t n);

struct ParetoEntry {
  std::string challenger;
  std::vector<double> losses;        // per member
  bool better_somewhere = false;
  bool worse_somewhere = false;
  bool violation = false;            // better somewhere and worse nowhere
};

struct ParetoReport {
  std::vector<double> lambda_xi_losses;  // per member
  std::vector<ParetoEntry> entries;
  bool violation_found = false;
};

/// For every challenger: if its exact loss is strictly smaller than
/// Lambda_xi's in some member, it must be strictly larger in another.
ParetoReport pareto_check(const bayes::BayesMixture& cls, const LossMatrix& loss, std::size_t n,
                          const std::vector<StrategyPtr>& challengers, double tol = 1e-12);

/// Default ceiling on the number of strategies the exhaustive search visits.
inline constexpr double kMaxStrategies = 1e6;

struct StrategySearchResult {
  std::uint64_t strategies = 0;
  double min_loss = 0.0;
  std::vector<std::size_t> argmin;  // TableStrategy table of a minimizer
  std::uint64_t below = 0;          // strategies with loss < threshold - tol
};

/// Exact loss of every deterministic strategy on horizon n: all
/// |Y|^(number of histories of length < n) tables. Each strategy's loss is
/// the sum of two partial sums over a fixed split of the histories, so every
/// table is scored. Also counts tables scoring below `threshold`.
StrategySearchResult exhaustive_strategy_search(const Semimeasure& mu, const LossMatrix& loss, std::size_t n,
                                                double threshold, double tol = 1e-12,
                                                double max_strategies = kMaxStrategies);

/// Number of deterministic strategies of horizon n (as a double; may be huge).
double strategy_count(int alphabet_size, int decisions, std::size_t n);

}  // namespace unilearn::decision
