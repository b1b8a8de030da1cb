#pragma once

// Online learners for deterministic environments: learning by enumeration,
// majority vote over a finite class, and weighted majority over a (truncated)
// countable class.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "unilearn/sequences.hpp"

namespace unilearn::det {

/// Indexed hypotheses H_1..H_N with strictly positive weights summing to <= 1.
/// Index 1 is stored at position 0.
class HypothesisClass {
 public:
  HypothesisClass(std::vector<SequencePtr> hypotheses, std::vector<double> weights);

  /// Materializes the first `cap` members of a countable class.
  static HypothesisClass lazy(std::size_t cap, const std::function<SequencePtr(std::size_t index)>& make,
                              const std::function<double(std::size_t index)>& weight);

  static HypothesisClass uniform(std::vector<SequencePtr> hypotheses);

  std::size_t size() const { return hypotheses_.size(); }
  const SymbolSequence& at(std::size_t index) const { return *hypotheses_.at(index - 1); }
  SequencePtr ptr(std::size_t index) const { return hypotheses_.at(index - 1); }
  double weight(std::size_t index) const { return weights_.at(index - 1); }
  Alphabet alphabet() const { return alphabet_; }

 private:
  std::vector<SequencePtr> hypotheses_;
  std::vector<double> weights_;
  Alphabet alphabet_;
};

/// w_i = (i+1)^-2, whose sum over i >= 1 is pi^2/6 - 1 < 1.
double inverse_square_weight(std::size_t index);

struct LearnerStep {
  std::size_t t = 0;  // 1-based
  Symbol prediction = 0;
  Symbol truth = 0;
  bool error = false;
  std::size_t consistent_before = 0;  // |M_t| among hypotheses that predict x_t
  std::size_t consistent_after = 0;
  double weight_before = 0.0;  // W over the same set
  double weight_after = 0.0;
  std::size_t selected = 0;  // enumeration learner: index used to predict
};

struct LearnerTrace {
  std::vector<LearnerStep> steps;
  std::size_t errors = 0;
};

/// Gold-style learning: predict with the smallest-index consistent hypothesis.
LearnerTrace enumeration_learner(const HypothesisClass& cls, const SymbolSequence& truth, std::size_t horizon);

/// Majority vote over the consistent set. Binary alphabet only.
LearnerTrace majority_learner(const HypothesisClass& cls, const SymbolSequence& truth, std::size_t horizon);

/// argmax_a W_a, ties toward the smallest symbol.
LearnerTrace weighted_majority_learner(const HypothesisClass& cls, const SymbolSequence& truth,
                                       std::size_t horizon);

struct ConsistentWeight {
  double total = 0.0;               // W
  std::vector<double> by_symbol;    // W_a
};

/// W = weight of hypotheses whose sequence starts with `observed`; W_a splits
/// it by the next symbol. Hypotheses that end right after `observed`
/// contribute to W but to no W_a.
ConsistentWeight consistent_weight(const HypothesisClass& cls, SymbolView observed);

/// Error ceiling log_{|X|/(|X|-1)} (1/w_m) for weighted majority.
double weighted_majority_bound(double truth_weight, int alphabet_size);

}  // namespace unilearn::det
