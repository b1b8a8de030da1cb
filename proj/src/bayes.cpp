#include "unilearn/bayes.hpp"

#include <cmath>

namespace unilearn::bayes {

BayesMixture::BayesMixture(std::vector<SemimeasurePtr> members, std::vector<double> weights)
    : members_(std::move(members)),
      weights_(std::move(weights)),
      alphabet_(members_.empty() ? Alphabet(2) : members_.front()->alphabet()) {
  if (members_.empty()) throw InvalidArgument("mixture needs at least one member");
  if (members_.size() != weights_.size()) throw InvalidArgument("mixture: one weight per member required");
  double total = 0.0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (!members_[i]) throw InvalidArgument("mixture: null member");
    if (members_[i]->alphabet() != alphabet_) throw InvalidArgument("mixture members must share one alphabet");
    if (!(weights_[i] > 0.0)) throw InvalidArgument("mixture weights must be strictly positive");
    total += weights_[i];
    log_weights_.push_back(std::log(weights_[i]));
  }
  if (total > 1.0 + 1e-12) throw InvalidArgument("mixture weights must sum to at most 1");
}

bool BayesMixture::is_measure() const {
  double total = 0.0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (!members_[i]->is_measure()) return false;
    total += weights_[i];
  }
  return std::abs(total - 1.0) <= 1e-12;
}

std::vector<double> BayesMixture::member_log_terms(SymbolView x) const {
  std::vector<double> terms(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const double l = members_[i]->log_joint(x);
    terms[i] = l == kNegInf ? kNegInf : log_weights_[i] + l;
  }
  return terms;
}

double BayesMixture::log_joint(SymbolView x) const {
  const auto terms = member_log_terms(x);
  return log_sum(terms);
}

std::vector<double> BayesMixture::conditional(SymbolView x) const {
  // xi(a|x) = sum_nu posterior_nu(x) nu(a|x); members that gave x zero mass
  // drop out of the posterior and are never conditioned.
  const auto post = posterior(*this, x);
  std::vector<double> out(static_cast<std::size_t>(alphabet_.size()), 0.0);
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (post[i] == 0.0) continue;
    const auto c = members_[i]->conditional(x);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] += post[i] * c[a];
  }
  return out;
}

double mixture_joint(const BayesMixture& mix, SymbolView x) { return mix.joint(x); }

double mixture_predictive(const BayesMixture& mix, SymbolView x, Symbol a) { return predictive(mix, x, a); }

std::vector<double> posterior(const BayesMixture& mix, SymbolView x) {
  const auto terms = mix.member_log_terms(x);
  const double total = log_sum(terms);
  if (total == kNegInf) {
    throw ConditioningOnNull("posterior: every member assigns probability zero to '" + format_symbols(x) + "'");
  }
  std::vector<double> out(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) out[i] = terms[i] == kNegInf ? 0.0 : std::exp(terms[i] - total);
  return out;
}

std::vector<double> update_posterior(const BayesMixture& mix, std::span<const double> current, SymbolView x,
                                     Symbol a) {
  if (current.size() != mix.size()) throw InvalidArgument("update_posterior: posterior size mismatch");
  std::vector<double> logs(mix.size(), kNegInf);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    if (current[i] <= 0.0) continue;
    const double p = mix.member(i).conditional(x)[a];
    if (p > 0.0) logs[i] = std::log(current[i]) + std::log(p);
  }
  const double total = log_sum(logs);
  if (total == kNegInf) throw ConditioningOnNull("update_posterior: observation has zero posterior mass");
  std::vector<double> out(mix.size());
  for (std::size_t i = 0; i < mix.size(); ++i) out[i] = logs[i] == kNegInf ? 0.0 : std::exp(logs[i] - total);
  return out;
}

std::vector<double> uniform_weights(std::size_t n) {
  if (n == 0) throw InvalidArgument("uniform_weights: empty class");
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace unilearn::bayes
