#include "unilearn/models.hpp"

#include <cmath>

namespace unilearn {

namespace {

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

void validate_distribution(const std::vector<double>& p, const char* what) {
  if (p.size() < 2) throw InvalidArgument(std::string(what) + ": distribution needs at least two entries");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument(std::string(what) + ": probabilities must lie in [0,1]");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument(std::string(what) + ": probabilities must sum to 1, got " + std::to_string(total));
  }
}

}  // namespace

BernoulliModel::BernoulliModel(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("bernoulli: theta must lie in [0,1]");
}

double BernoulliModel::log_joint(SymbolView x) const {
  validate_string(alphabet(), x);
  std::size_t ones = 0;
  for (Symbol s : x) ones += s;
  const std::size_t zeros = x.size() - ones;
  double l = 0.0;
  if (ones > 0) l += static_cast<double>(ones) * safe_log(theta_);
  if (zeros > 0) l += static_cast<double>(zeros) * safe_log(1.0 - theta_);
  return l;
}

std::vector<double> BernoulliModel::conditional(SymbolView x) const {
  if (log_joint(x) == kNegInf) throw ConditioningOnNull("bernoulli: conditioning on a null string");
  return {1.0 - theta_, theta_};
}

CategoricalModel::CategoricalModel(std::vector<double> probabilities) : probs_(std::move(probabilities)) {
  validate_distribution(probs_, "categorical");
}

double CategoricalModel::log_joint(SymbolView x) const {
  validate_string(alphabet(), x);
  double l = 0.0;
  for (Symbol s : x) {
    if (probs_[s] == 0.0) return kNegInf;
    l += std::log(probs_[s]);
  }
  return l;
}

std::vector<double> CategoricalModel::conditional(SymbolView x) const {
  if (log_joint(x) == kNegInf) throw ConditioningOnNull("categorical: conditioning on a null string");
  return probs_;
}

MarkovModel::MarkovModel(int order, std::vector<std::vector<double>> rows)
    : order_(order), alphabet_(rows.empty() ? 0 : static_cast<int>(rows.front().size())), rows_(std::move(rows)) {
  if (order < 0) throw InvalidArgument("markov: order must be >= 0");
  std::size_t expected = 1;
  for (int i = 0; i < order; ++i) expected *= static_cast<std::size_t>(alphabet_.size());
  if (rows_.size() != expected) {
    throw InvalidArgument("markov: order " + std::to_string(order) + " over " + std::to_string(alphabet_.size()) +
                          " symbols needs " + std::to_string(expected) + " rows, got " +
                          std::to_string(rows_.size()));
  }
  for (const auto& row : rows_) {
    if (row.size() != static_cast<std::size_t>(alphabet_.size())) {
      throw InvalidArgument("markov: all rows must have the same length");
    }
    validate_distribution(row, "markov");
  }
}

std::size_t MarkovModel::context_at(SymbolView x, std::size_t t) const {
  std::size_t c = 0;
  const auto k = static_cast<std::size_t>(alphabet_.size());
  for (int j = order_; j >= 1; --j) {
    const Symbol s = t >= static_cast<std::size_t>(j) ? x[t - static_cast<std::size_t>(j)] : 0u;
    c = c * k + s;
  }
  return c;
}

double MarkovModel::log_joint(SymbolView x) const {
  validate_string(alphabet_, x);
  double l = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double p = rows_[context_at(x, t)][x[t]];
    if (p == 0.0) return kNegInf;
    l += std::log(p);
  }
  return l;
}

std::vector<double> MarkovModel::conditional(SymbolView x) const {
  if (log_joint(x) == kNegInf) throw ConditioningOnNull("markov: conditioning on a null string");
  return rows_[context_at(x, x.size())];
}

double KTModel::log_joint(SymbolView x) const {
  validate_string(alphabet_, x);
  std::vector<std::size_t> counts(static_cast<std::size_t>(alphabet_.size()), 0);
  const double half_k = 0.5 * alphabet_.size();
  double l = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    l += std::log((static_cast<double>(counts[x[t]]) + 0.5) / (static_cast<double>(t) + half_k));
    ++counts[x[t]];
  }
  return l;
}

std::vector<double> KTModel::conditional(SymbolView x) const {
  validate_string(alphabet_, x);
  std::vector<double> out(static_cast<std::size_t>(alphabet_.size()), 0.5);
  for (Symbol s : x) out[s] += 1.0;
  const double den = static_cast<double>(x.size()) + 0.5 * alphabet_.size();
  for (double& v : out) v /= den;
  return out;
}

double DeterministicSequenceModel::log_joint(SymbolView x) const {
  validate_string(alphabet(), x);
  return sequence_->has_prefix(x) ? 0.0 : kNegInf;
}

}  // namespace unilearn
