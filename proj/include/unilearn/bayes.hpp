#pragma once

// Finite-class Bayes mixtures and complexity-based prior weights.

#include <memory>
#include <vector>

#include "unilearn/models.hpp"

namespace unilearn::bayes {

/// xi(x) = sum_nu w_nu nu(x). Weights must be positive with sum <= 1.
class BayesMixture final : public Semimeasure {
 public:
  BayesMixture(std::vector<SemimeasurePtr> members, std::vector<double> weights);

  Alphabet alphabet() const override { return alphabet_; }
  double log_joint(SymbolView x) const override;
  std::vector<double> conditional(SymbolView x) const override;
  bool is_measure() const override;

  std::size_t size() const { return members_.size(); }
  const Semimeasure& member(std::size_t i) const { return *members_.at(i); }
  SemimeasurePtr member_ptr(std::size_t i) const { return members_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<double>& weights() const { return weights_; }

  /// log(w_nu) + log nu(x) for every member.
  std::vector<double> member_log_terms(SymbolView x) const;

 private:
  std::vector<SemimeasurePtr> members_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  Alphabet alphabet_;
};

double mixture_joint(const BayesMixture& mix, SymbolView x);
double mixture_predictive(const BayesMixture& mix, SymbolView x, Symbol a);

/// Normalized posterior w_nu nu(x) / xi(x). Throws ConditioningOnNull when
/// every member gives x probability zero.
std::vector<double> posterior(const BayesMixture& mix, SymbolView x);

/// One Bayes step: from the posterior after x to the posterior after xa.
std::vector<double> update_posterior(const BayesMixture& mix, std::span<const double> current, SymbolView x,
                                     Symbol a);

/// Equal weights summing to one.
std::vector<double> uniform_weights(std::size_t n);

}  // namespace unilearn::bayes
