#include "unilearn/sideinfo.hpp"

#include <cmath>
#include <limits>

namespace unilearn::sideinfo {

namespace {

void validate_rows(const std::vector<std::vector<double>>& rows, const char* what) {
  if (rows.empty()) throw InvalidArgument(std::string(what) + ": empty table");
  const std::size_t width = rows.front().size();
  if (width < 2) throw InvalidArgument(std::string(what) + ": rows need at least two entries");
  for (const auto& row : rows) {
    if (row.size() != width) throw InvalidArgument(std::string(what) + ": ragged table");
    double total = 0.0;
    for (double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(what) + ": entries must lie in [0,1]");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument(std::string(what) + ": rows must sum to 1");
  }
}

void require_side(SymbolView x, SymbolView y) {
  if (y.size() < x.size()) {
    throw InvalidArgument("side stream of length " + std::to_string(y.size()) + " cannot condition " +
                          std::to_string(x.size()) + " observations");
  }
}

// Replays a fixed past in front of every query.
class ConditionedView final : public ChronologicalModel {
 public:
  ConditionedView(ChronologicalPtr base, SymbolString x, SymbolString y, double log_norm)
      : base_(std::move(base)), x_(std::move(x)), y_(std::move(y)), log_norm_(log_norm) {}

  Alphabet alphabet() const override { return base_->alphabet(); }
  SideAlphabet side_alphabet() const override { return base_->side_alphabet(); }
  double log_joint(SymbolView x, SymbolView y) const override {
    SymbolString xs = x_;
    xs.insert(xs.end(), x.begin(), x.end());
    SymbolString ys = y_;
    ys.insert(ys.end(), y.begin(), y.end());
    const double l = base_->log_joint(xs, ys);
    return l == kNegInf ? kNegInf : l - log_norm_;
  }

 private:
  ChronologicalPtr base_;
  SymbolString x_;
  SymbolString y_;
  double log_norm_;
};

}  // namespace

ChronologicalPtr ChronologicalModel::conditioned(SymbolView x, SymbolView y) const {
  require_side(x, y);
  const double l = log_joint(x, y);
  if (l == kNegInf) throw ConditioningOnNull("conditioning a chronological model on a null history");
  return std::make_shared<ConditionedView>(shared_from_this(), SymbolString(x.begin(), x.end()),
                                           SymbolString(y.begin(), y.begin() + static_cast<long>(x.size())), l);
}

std::vector<double> ChronologicalModel::conditional(SymbolView x, SymbolView y) const {
  if (y.size() != x.size() + 1) throw InvalidArgument("conditional needs y_{1:t} with t = len(x) + 1");
  const double base = log_joint(x, y.first(x.size()));
  if (base == kNegInf) throw ConditioningOnNull("conditional: history has probability zero");
  std::vector<double> out(static_cast<std::size_t>(alphabet().size()));
  SymbolString xa(x.begin(), x.end());
  xa.push_back(0);
  for (std::size_t a = 0; a < out.size(); ++a) {
    xa.back() = static_cast<Symbol>(a);
    const double l = log_joint(xa, y);
    out[a] = l == kNegInf ? 0.0 : std::exp(l - base);
  }
  return out;
}

ConditionalIID::ConditionalIID(std::vector<std::vector<double>> table)
    : table_(std::move(table)), alphabet_(table_.empty() ? 2 : static_cast<int>(table_.front().size())) {
  validate_rows(table_, "conditional iid");
}

double ConditionalIID::log_joint(SymbolView x, SymbolView y) const {
  require_side(x, y);
  validate_string(alphabet_, x);
  double l = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (y[t] >= table_.size()) throw InvalidArgument("side symbol outside the side alphabet");
    const double p = table_[y[t]][x[t]];
    if (p == 0.0) return kNegInf;
    l += std::log(p);
  }
  return l;
}

ChronologicalPtr ConditionalIID::conditioned(SymbolView x, SymbolView y) const {
  if (log_joint(x, y) == kNegInf) throw ConditioningOnNull("conditioning a chronological model on a null history");
  return shared_from_this();
}

ConditionalMarkov::ConditionalMarkov(int side_size, std::vector<std::vector<double>> table, Symbol initial)
    : side_(side_size),
      table_(std::move(table)),
      alphabet_(table_.empty() ? 2 : static_cast<int>(table_.front().size())),
      initial_(initial) {
  validate_rows(table_, "conditional markov");
  if (table_.size() != static_cast<std::size_t>(alphabet_.size() * side_.size())) {
    throw InvalidArgument("conditional markov: need |X|*|Y| rows, got " + std::to_string(table_.size()));
  }
  if (!alphabet_.contains(initial)) throw InvalidArgument("conditional markov: initial symbol outside alphabet");
}

double ConditionalMarkov::log_joint(SymbolView x, SymbolView y) const {
  require_side(x, y);
  validate_string(alphabet_, x);
  double l = 0.0;
  Symbol prev = initial_;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (!side_.contains(y[t])) throw InvalidArgument("side symbol outside the side alphabet");
    const double p = table_[prev * static_cast<Symbol>(side_.size()) + y[t]][x[t]];
    if (p == 0.0) return kNegInf;
    l += std::log(p);
    prev = x[t];
  }
  return l;
}

ChronologicalPtr ConditionalMarkov::conditioned(SymbolView x, SymbolView y) const {
  if (log_joint(x, y) == kNegInf) throw ConditioningOnNull("conditioning a chronological model on a null history");
  if (x.empty()) return shared_from_this();
  return std::make_shared<ConditionalMarkov>(side_.size(), table_, x.back());
}

ConditionalMixture::ConditionalMixture(std::vector<ChronologicalPtr> members, std::vector<double> weights)
    : members_(std::move(members)),
      weights_(std::move(weights)),
      alphabet_(members_.empty() ? Alphabet(2) : members_.front()->alphabet()),
      side_(members_.empty() ? SideAlphabet(1) : members_.front()->side_alphabet()) {
  if (members_.empty()) throw InvalidArgument("conditional mixture needs at least one member");
  if (members_.size() != weights_.size()) throw InvalidArgument("conditional mixture: one weight per member");
  double total = 0.0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (!members_[i]) throw InvalidArgument("conditional mixture: null member");
    if (members_[i]->alphabet() != alphabet_ || members_[i]->side_alphabet() != side_) {
      throw InvalidArgument("conditional mixture members must share both alphabets");
    }
    if (!(weights_[i] > 0.0)) throw InvalidArgument("conditional mixture weights must be strictly positive");
    total += weights_[i];
    log_weights_.push_back(std::log(weights_[i]));
  }
  if (total > 1.0 + 1e-12) throw InvalidArgument("conditional mixture weights must sum to at most 1");
}

double ConditionalMixture::log_joint(SymbolView x, SymbolView y) const {
  std::vector<double> terms(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const double l = members_[i]->log_joint(x, y);
    terms[i] = l == kNegInf ? kNegInf : log_weights_[i] + l;
  }
  return log_sum(terms);
}

std::vector<double> ConditionalMixture::posterior(SymbolView x, SymbolView y) const {
  std::vector<double> terms(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const double l = members_[i]->log_joint(x, y);
    terms[i] = l == kNegInf ? kNegInf : log_weights_[i] + l;
  }
  const double total = log_sum(terms);
  if (total == kNegInf) throw ConditioningOnNull("posterior: history has probability zero under every member");
  std::vector<double> out(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) out[i] = terms[i] == kNegInf ? 0.0 : std::exp(terms[i] - total);
  return out;
}

ChronologicalPtr ConditionalMixture::conditioned(SymbolView x, SymbolView y) const {
  require_side(x, y);
  if (x.empty()) return shared_from_this();
  const auto post = posterior(x, y);
  std::vector<ChronologicalPtr> members;
  std::vector<double> weights;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (post[i] <= 0.0) continue;
    members.push_back(members_[i]->conditioned(x, y));
    weights.push_back(post[i]);
  }
  // Posterior weights sum to one up to rounding; renormalize so the
  // constructor's sum check cannot trip on the last ulp.
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return std::make_shared<ConditionalMixture>(std::move(members), std::move(weights));
}

ConditionalApproxM::ConditionalApproxM(Alphabet alphabet, SideAlphabet side, vm::Budget budget)
    : alphabet_(alphabet), side_(side), budget_(budget) {}

double ConditionalApproxM::log_joint(SymbolView x, SymbolView y) const {
  const double m = conditional_approx_M(x, y, budget_, alphabet_);
  return m > 0.0 ? std::log(m) : kNegInf;
}

double FixedSide::log_joint(SymbolView x) const {
  if (x.size() > y_.size()) throw InvalidArgument("FixedSide: observation longer than the side stream");
  return model_->log_joint(x, SymbolView(y_).first(x.size()));
}

double conditional_mixture(const ConditionalMixture& mix, SymbolView x, SymbolView y) {
  return std::exp(mix.log_joint(x, y));
}

double conditional_predictive(const ConditionalMixture& mix, SymbolView x_past, SymbolView y_upto, Symbol a) {
  if (!mix.alphabet().contains(a)) throw InvalidArgument("conditional_predictive: symbol outside alphabet");
  return mix.conditional(x_past, y_upto)[a];
}

double conditional_approx_M(SymbolView x, SymbolView y, vm::Budget budget, Alphabet alphabet) {
  require_side(x, y);
  const SymbolString side(y.begin(), y.end());
  vm::MachineConfig config;
  config.output_alphabet = alphabet;
  config.width = vm::OpcodeWidth::kFourBit;
  return vm::approx_M(x, budget, config, &side);
}

ClassifyTrace online_classify(const ChronologicalModel& model, SymbolView y, SymbolView x) {
  if (x.size() != y.size()) throw InvalidArgument("online_classify: paired stream lengths differ");
  ClassifyTrace trace;
  for (std::size_t t = 0; t < x.size(); ++t) {
    ClassifyStep step;
    step.t = t + 1;
    step.side = y[t];
    step.observed = x[t];
    step.predictive = model.conditional(x.first(t), y.first(t + 1));
    const double p = step.predictive[x[t]];
    step.log_loss = p > 0.0 ? -std::log(p) : std::numeric_limits<double>::infinity();
    trace.cumulative_log_loss += step.log_loss;
    trace.steps.push_back(std::move(step));
    if (p <= 0.0) break;
  }
  return trace;
}

SideBoundReport side_bound_check(const ConditionalMixture& mix, std::size_t mu_index, std::size_t n,
                                 prediction::Functional functional, double tol) {
  SideBoundReport report;
  report.bound = std::log(1.0 / mix.weights().at(mu_index));
  const auto& mu = mix.member(mu_index);
  for_each_string(mix.side_alphabet().size(), n, [&](SymbolView y) {
    const SymbolString ys(y.begin(), y.end());
    FixedSide rho_y(mix, ys);
    FixedSide mu_y(mu, ys);
    const double v = prediction::exact_cumulative_distance(rho_y, mu_y, n, functional);
    ++report.streams;
    if (report.streams == 1 || v > report.worst_value) {
      report.worst_value = v;
      report.worst_stream = ys;
    }
    if (v > report.bound + tol) report.holds = false;
  });
  return report;
}

}  // namespace unilearn::sideinfo
