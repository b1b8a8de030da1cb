#pragma once

// Concrete computable semimeasures used to populate finite hypothesis classes.

#include <memory>
#include <vector>

#include "unilearn/semimeasure.hpp"
#include "unilearn/sequences.hpp"

namespace unilearn {

using SemimeasurePtr = std::shared_ptr<const Semimeasure>;

/// i.i.d. over {0,1} with P(1) = theta.
class BernoulliModel final : public Semimeasure {
 public:
  explicit BernoulliModel(double theta);

  Alphabet alphabet() const override { return Alphabet(2); }
  double log_joint(SymbolView x) const override;
  std::vector<double> conditional(SymbolView x) const override;
  bool is_measure() const override { return true; }

  double theta() const { return theta_; }

 private:
  double theta_;
};

/// i.i.d. with an arbitrary distribution over the alphabet.
class CategoricalModel final : public Semimeasure {
 public:
  explicit CategoricalModel(std::vector<double> probabilities);

  Alphabet alphabet() const override { return Alphabet(static_cast<int>(probs_.size())); }
  double log_joint(SymbolView x) const override;
  std::vector<double> conditional(SymbolView x) const override;
  bool is_measure() const override { return true; }

 private:
  std::vector<double> probs_;
};

/// Order-k Markov chain. rows[c] is the next-symbol distribution for context
/// index c = sum_j x_{t-k+j} |X|^(k-1-j) (oldest symbol most significant).
/// Positions before the start of the string read as symbol 0.
class MarkovModel final : public Semimeasure {
 public:
  MarkovModel(int order, std::vector<std::vector<double>> rows);

  Alphabet alphabet() const override { return alphabet_; }
  double log_joint(SymbolView x) const override;
  std::vector<double> conditional(SymbolView x) const override;
  bool is_measure() const override { return true; }

  int order() const { return order_; }

 private:
  std::size_t context_at(SymbolView x, std::size_t t) const;

  int order_;
  Alphabet alphabet_;
  std::vector<std::vector<double>> rows_;
};

/// Krichevsky-Trofimov add-half estimator:
/// P(a | x) = (count_a(x) + 1/2) / (len(x) + |X|/2).
class KTModel final : public Semimeasure {
 public:
  explicit KTModel(Alphabet alphabet) : alphabet_(alphabet) {}

  Alphabet alphabet() const override { return alphabet_; }
  double log_joint(SymbolView x) const override;
  std::vector<double> conditional(SymbolView x) const override;
  bool is_measure() const override { return true; }

 private:
  Alphabet alphabet_;
};

/// Point mass on one sequence: nu(x) = 1 iff x is a prefix of the sequence.
/// A finite sequence gives a semimeasure that is not a measure.
class DeterministicSequenceModel final : public Semimeasure {
 public:
  explicit DeterministicSequenceModel(SequencePtr sequence) : sequence_(std::move(sequence)) {}

  Alphabet alphabet() const override { return sequence_->alphabet(); }
  double log_joint(SymbolView x) const override;
  bool is_measure() const override { return !sequence_->length().has_value(); }

  const SymbolSequence& sequence() const { return *sequence_; }

 private:
  SequencePtr sequence_;
};

}  // namespace unilearn
