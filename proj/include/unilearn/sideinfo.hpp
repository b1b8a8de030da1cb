#pragma once

// Chronological conditional semimeasures rho(x_{1:n} | y_{1:n}): prediction
// of x_t from side information y_{1:t} and the past (x_{<t}, y_{<t}).

#include <memory>
#include <vector>

#include "unilearn/models.hpp"
#include "unilearn/monotone_vm.hpp"
#include "unilearn/prediction.hpp"
#include "unilearn/semimeasure.hpp"

namespace unilearn::sideinfo {

class ChronologicalModel;
using ChronologicalPtr = std::shared_ptr<const ChronologicalModel>;

/// One semimeasure in x for every side stream y. log_joint(x, y) may be
/// called with y longer than x; implementations must not look at y_t for
/// t > len(x).
class ChronologicalModel : public std::enable_shared_from_this<ChronologicalModel> {
 public:
  virtual ~ChronologicalModel() = default;

  virtual Alphabet alphabet() const = 0;
  virtual SideAlphabet side_alphabet() const = 0;
  virtual double log_joint(SymbolView x, SymbolView y) const = 0;

  /// The model of the future given a past: the returned model's joint of
  /// (x', y') is rho(x x' | y y') / rho(x | y). The default wraps this model
  /// and replays the past on every call; families with sufficient statistics
  /// override it. Throws ConditioningOnNull when rho(x | y) = 0.
  virtual ChronologicalPtr conditioned(SymbolView x, SymbolView y) const;

  /// rho(a | x_{<t}, y_{1:t}) for every a, where y has exactly len(x)+1 symbols.
  std::vector<double> conditional(SymbolView x, SymbolView y) const;
};

/// rho(x|y) = prod_t table[y_t][x_t]: conditionally i.i.d. given the side symbol.
class ConditionalIID final : public ChronologicalModel {
 public:
  explicit ConditionalIID(std::vector<std::vector<double>> table);

  Alphabet alphabet() const override { return alphabet_; }
  SideAlphabet side_alphabet() const override { return SideAlphabet(static_cast<int>(table_.size())); }
  double log_joint(SymbolView x, SymbolView y) const override;
  ChronologicalPtr conditioned(SymbolView x, SymbolView y) const override;

  const std::vector<std::vector<double>>& table() const { return table_; }

 private:
  std::vector<std::vector<double>> table_;
  Alphabet alphabet_;
};

/// rho(x_t | x_{t-1}, y_t) = table[x_{t-1} |Y| + y_t][x_t], with x_0 = initial.
class ConditionalMarkov final : public ChronologicalModel {
 public:
  ConditionalMarkov(int side_size, std::vector<std::vector<double>> table, Symbol initial = 0);

  Alphabet alphabet() const override { return alphabet_; }
  SideAlphabet side_alphabet() const override { return side_; }
  double log_joint(SymbolView x, SymbolView y) const override;
  ChronologicalPtr conditioned(SymbolView x, SymbolView y) const override;

 private:
  SideAlphabet side_;
  std::vector<std::vector<double>> table_;
  Alphabet alphabet_;
  Symbol initial_;
};

/// An unconditional semimeasure seen as a chronological model with |Y| = 1
/// (or any side alphabet whose symbols it ignores).
class IgnoreSide final : public ChronologicalModel {
 public:
  explicit IgnoreSide(SemimeasurePtr base, SideAlphabet side = SideAlphabet(1)) : base_(std::move(base)), side_(side) {}

  Alphabet alphabet() const override { return base_->alphabet(); }
  SideAlphabet side_alphabet() const override { return side_; }
  double log_joint(SymbolView x, SymbolView) const override { return base_->log_joint(x); }

 private:
  SemimeasurePtr base_;
  SideAlphabet side_;
};

/// sum_nu w_nu nu(x | y).
class ConditionalMixture final : public ChronologicalModel {
 public:
  ConditionalMixture(std::vector<ChronologicalPtr> members, std::vector<double> weights);

  Alphabet alphabet() const override { return alphabet_; }
  SideAlphabet side_alphabet() const override { return side_; }
  double log_joint(SymbolView x, SymbolView y) const override;
  /// Mixture of the conditioned members under posterior weights.
  ChronologicalPtr conditioned(SymbolView x, SymbolView y) const override;

  std::size_t size() const { return members_.size(); }
  const ChronologicalModel& member(std::size_t i) const { return *members_.at(i); }
  ChronologicalPtr member_ptr(std::size_t i) const { return members_.at(i); }
  const std::vector<double>& weights() const { return weights_; }

  /// Normalized posterior after (x, y).
  std::vector<double> posterior(SymbolView x, SymbolView y) const;

 private:
  std::vector<ChronologicalPtr> members_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  Alphabet alphabet_;
  SideAlphabet side_;
};

/// Conditional-mode machine: M(x | y) lower bound from 4-bit programs that
/// may read y through READ_Y.
class ConditionalApproxM final : public ChronologicalModel {
 public:
  ConditionalApproxM(Alphabet alphabet, SideAlphabet side, vm::Budget budget);

  Alphabet alphabet() const override { return alphabet_; }
  SideAlphabet side_alphabet() const override { return side_; }
  double log_joint(SymbolView x, SymbolView y) const override;

 private:
  Alphabet alphabet_;
  SideAlphabet side_;
  vm::Budget budget_;
};

/// The semimeasure x -> rho(x | y) for one fixed side stream y (len(y) must
/// cover every x it is asked about).
class FixedSide final : public Semimeasure {
 public:
  FixedSide(ChronologicalPtr model, SymbolString y) : owner_(std::move(model)), model_(owner_.get()), y_(std::move(y)) {}
  /// Non-owning: `model` must outlive this object.
  FixedSide(const ChronologicalModel& model, SymbolString y) : model_(&model), y_(std::move(y)) {}

  Alphabet alphabet() const override { return model_->alphabet(); }
  double log_joint(SymbolView x) const override;

 private:
  ChronologicalPtr owner_;
  const ChronologicalModel* model_;
  SymbolString y_;
};

double conditional_mixture(const ConditionalMixture& mix, SymbolView x, SymbolView y);

/// Mixture predictive of x_t = a given x_{<t} and y_{1:t}.
double conditional_predictive(const ConditionalMixture& mix, SymbolView x_past, SymbolView y_upto, Symbol a);

/// Lower bound on M(x|y) by enumerating the conditional-mode machine.
double conditional_approx_M(SymbolView x, SymbolView y, vm::Budget budget, Alphabet alphabet = Alphabet(2));

struct ClassifyStep {
  std::size_t t = 0;
  Symbol side = 0;
  Symbol observed = 0;
  std::vector<double> predictive;  // over x_t given (x_{<t}, y_{1:t})
  double log_loss = 0.0;           // -ln predictive[observed]
};

struct ClassifyTrace {
  std::vector<ClassifyStep> steps;
  double cumulative_log_loss = 0.0;
};

/// Online prediction of x_t after seeing y_t, for a paired stream.
ClassifyTrace online_classify(const ChronologicalModel& model, SymbolView y, SymbolView x);

struct SideBoundReport {
  std::size_t streams = 0;
  double worst_value = 0.0;  // max over y-streams of the cumulative distance
  SymbolString worst_stream;
  double bound = 0.0;        // ln(1/w_mu)
  bool holds = true;
};

/// Exhaustive over all y-streams of length n: the cumulative expected
/// distance between the mixture and member mu under mu(. | y) stays within
/// ln(1/w_mu) for every individual y.
SideBoundReport side_bound_check(const ConditionalMixture& mix, std::size_t mu_index, std::size_t n,
                                 prediction::Functional functional, double tol = 1e-9);

}  // namespace unilearn::sideinfo
