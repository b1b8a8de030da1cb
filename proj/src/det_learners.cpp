#include "unilearn/det_learners.hpp"

#include <cmath>
#include <optional>

namespace unilearn::det {

HypothesisClass::HypothesisClass(std::vector<SequencePtr> hypotheses, std::vector<double> weights)
    : hypotheses_(std::move(hypotheses)),
      weights_(std::move(weights)),
      alphabet_(hypotheses_.empty() ? Alphabet(2) : hypotheses_.front()->alphabet()) {
  if (hypotheses_.empty()) throw InvalidArgument("hypothesis class must not be empty");
  if (hypotheses_.size() != weights_.size()) throw InvalidArgument("one weight per hypothesis required");
  double total = 0.0;
  for (std::size_t i = 0; i < hypotheses_.size(); ++i) {
    if (!hypotheses_[i]) throw InvalidArgument("null hypothesis at index " + std::to_string(i + 1));
    if (hypotheses_[i]->alphabet() != alphabet_) throw InvalidArgument("hypotheses must share one alphabet");
    if (!(weights_[i] > 0.0)) throw InvalidArgument("weights must be strictly positive");
    total += weights_[i];
    if (total > 1.0 + 1e-12) throw InvalidArgument("weights must sum to at most 1");
  }
}

HypothesisClass HypothesisClass::lazy(std::size_t cap, const std::function<SequencePtr(std::size_t)>& make,
                                      const std::function<double(std::size_t)>& weight) {
  std::vector<SequencePtr> hs;
  std::vector<double> ws;
  hs.reserve(cap);
  ws.reserve(cap);
  for (std::size_t i = 1; i <= cap; ++i) {
    hs.push_back(make(i));
    ws.push_back(weight(i));
  }
  return HypothesisClass(std::move(hs), std::move(ws));
}

HypothesisClass HypothesisClass::uniform(std::vector<SequencePtr> hypotheses) {
  const double w = 1.0 / static_cast<double>(hypotheses.size());
  std::vector<double> ws(hypotheses.size(), w);
  return HypothesisClass(std::move(hypotheses), std::move(ws));
}

double inverse_square_weight(std::size_t index) {
  const double d = static_cast<double>(index) + 1.0;
  return 1.0 / (d * d);
}

double weighted_majority_bound(double truth_weight, int alphabet_size) {
  const double k = alphabet_size;
  return std::log(1.0 / truth_weight) / std::log(k / (k - 1.0));
}

namespace {

enum class Rule { kEnumeration, kMajority, kWeighted };

struct Candidate {
  std::size_t index;
  Symbol next;
};

LearnerTrace run_learner(Rule rule, const HypothesisClass& cls, const SymbolSequence& truth, std::size_t horizon) {
  if (truth.alphabet() != cls.alphabet()) throw InvalidArgument("truth and class alphabets differ");
  const auto k = static_cast<std::size_t>(cls.alphabet().size());
  std::vector<std::size_t> consistent(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) consistent[i] = i + 1;

  LearnerTrace trace;
  trace.steps.reserve(horizon);
  std::vector<Candidate> active;
  for (std::size_t t = 0; t < horizon; ++t) {
    // Hypotheses that ended before position t abstain forever; retire them.
    active.clear();
    for (std::size_t i : consistent) {
      if (auto s = cls.at(i).at(t)) active.push_back({i, *s});
    }
    if (active.empty()) {
      throw RealizabilityViolation("no consistent hypothesis left at t=" + std::to_string(t + 1));
    }
    const auto observed = truth.at(t);
    if (!observed) throw InvalidArgument("truth sequence ended at t=" + std::to_string(t + 1));

    LearnerStep step;
    step.t = t + 1;
    step.truth = *observed;
    step.consistent_before = active.size();
    std::vector<double> w_by_symbol(k, 0.0);
    std::vector<std::size_t> n_by_symbol(k, 0);
    for (const auto& c : active) {
      step.weight_before += cls.weight(c.index);
      w_by_symbol[c.next] += cls.weight(c.index);
      ++n_by_symbol[c.next];
    }

    switch (rule) {
      case Rule::kEnumeration:
        step.selected = active.front().index;
        step.prediction = active.front().next;
        break;
      case Rule::kMajority:
        step.prediction = n_by_symbol[1] > n_by_symbol[0] ? 1u : 0u;
        break;
      case Rule::kWeighted: {
        Symbol best = 0;
        for (Symbol a = 1; a < k; ++a) {
          if (w_by_symbol[a] > w_by_symbol[best]) best = a;
        }
        step.prediction = best;
        break;
      }
    }
    step.error = step.prediction != step.truth;
    if (step.error) ++trace.errors;

    consistent.clear();
    for (const auto& c : active) {
      if (c.next == step.truth) {
        consistent.push_back(c.index);
        step.weight_after += cls.weight(c.index);
      }
    }
    step.consistent_after = consistent.size();
    trace.steps.push_back(step);
    if (consistent.empty()) {
      throw RealizabilityViolation("every hypothesis contradicted the observation at t=" + std::to_string(t + 1));
    }
  }
  return trace;
}

}  // namespace

LearnerTrace enumeration_learner(const HypothesisClass& cls, const SymbolSequence& truth, std::size_t horizon) {
  return run_learner(Rule::kEnumeration, cls, truth, horizon);
}

LearnerTrace majority_learner(const HypothesisClass& cls, const SymbolSequence& truth, std::size_t horizon) {
  if (cls.alphabet().size() != 2) throw InvalidArgument("majority learner requires a binary alphabet");
  return run_learner(Rule::kMajority, cls, truth, horizon);
}

LearnerTrace weighted_majority_learner(const HypothesisClass& cls, const SymbolSequence& truth,
                                       std::size_t horizon) {
  return run_learner(Rule::kWeighted, cls, truth, horizon);
}

ConsistentWeight consistent_weight(const HypothesisClass& cls, SymbolView observed) {
  ConsistentWeight out;
  out.by_symbol.assign(static_cast<std::size_t>(cls.alphabet().size()), 0.0);
  for (std::size_t i = 1; i <= cls.size(); ++i) {
    const auto& h = cls.at(i);
    if (!h.has_prefix(observed)) continue;
    out.total += cls.weight(i);
    if (auto next = h.at(observed.size())) out.by_symbol[*next] += cls.weight(i);
  }
  return out;
}

}  // namespace unilearn::det
