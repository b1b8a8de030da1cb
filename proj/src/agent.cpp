#include "unilearn/agent.hpp"

#include <cmath>

#include "unilearn/parallel.hpp"
#include "unilearn/rng.hpp"

namespace unilearn::agent {

PerceptSpace::PerceptSpace(int observations, int reward_levels)
    : observations_(observations), reward_levels_(reward_levels) {
  if (observations < 1) throw InvalidArgument("percept space needs at least one observation");
  if (reward_levels < 2) throw InvalidArgument("percept space needs at least two reward levels");
  if (observations * reward_levels < 2) throw InvalidArgument("percept space needs at least two percepts");
}

Symbol PerceptSpace::encode(int observation, int reward_level) const {
  if (observation < 0 || observation >= observations_ || reward_level < 0 || reward_level >= reward_levels_) {
    throw InvalidArgument("percept (" + std::to_string(observation) + ", " + std::to_string(reward_level) +
                          ") outside the percept space");
  }
  return static_cast<Symbol>(observation * reward_levels_ + reward_level);
}

double PerceptSpace::reward(Symbol x) const {
  return static_cast<double>(reward_level(x)) / static_cast<double>(reward_levels_ - 1);
}

namespace {

void check_model(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space, SymbolView actions,
                 SymbolView percepts) {
  if (rho.alphabet().size() != space.size()) {
    throw InvalidArgument("environment model has " + std::to_string(rho.alphabet().size()) +
                          " percepts, the percept space " + std::to_string(space.size()));
  }
  if (actions.size() != percepts.size()) throw InvalidArgument("action and percept histories differ in length");
}

void check_nodes(const sideinfo::ChronologicalModel& rho, std::size_t horizon, double max_nodes) {
  const double branching = static_cast<double>(rho.side_alphabet().size()) * rho.alphabet().size();
  const double nodes = std::pow(branching, static_cast<double>(horizon));
  if (nodes > max_nodes) {
    throw CapExceeded("expectimax tree (|Y||X|)^n = " + std::to_string(nodes) + " exceeds the cap of " +
                      std::to_string(max_nodes));
  }
}

std::size_t pick(const std::vector<double>& values) {
  double best = values.front();
  for (double v : values) best = std::max(best, v);
  for (std::size_t y = 0; y < values.size(); ++y) {
    if (values[y] >= best - kTieTolerance) return y;
  }
  return 0;
}

struct Tree {
  const sideinfo::ChronologicalModel& rho;
  const PerceptSpace& space;
  int actions;
  int percepts;

  // Value of the best continuation for k more cycles after (ys, xs).
  double value(SymbolString& ys, SymbolString& xs, std::size_t k) const {
    if (k == 0) return 0.0;
    double best = 0.0;
    for (int y = 0; y < actions; ++y) {
      const double q = action_value(ys, xs, static_cast<Symbol>(y), k);
      if (y == 0 || q > best) best = q;
    }
    return best;
  }

  double action_value(SymbolString& ys, SymbolString& xs, Symbol y, std::size_t k) const {
    ys.push_back(y);
    const auto p = rho.conditional(xs, ys);
    double q = 0.0;
    for (int x = 0; x < percepts; ++x) {
      if (p[x] <= 0.0) continue;
      xs.push_back(static_cast<Symbol>(x));
      q += p[x] * (space.reward(static_cast<Symbol>(x)) + value(ys, xs, k - 1));
      xs.pop_back();
    }
    ys.pop_back();
    return q;
  }

  // Joint-weighted form: leaves hold (reward since the root) * rho(x|y) / rho(past).
  double flat(SymbolString& ys, SymbolString& xs, std::size_t k, double reward, double log_base) const {
    if (k == 0) {
      const double l = rho.log_joint(xs, ys);
      return l == kNegInf ? 0.0 : reward * std::exp(l - log_base);
    }
    double best = 0.0;
    for (int y = 0; y < actions; ++y) {
      const double q = flat_action(ys, xs, static_cast<Symbol>(y), k, reward, log_base);
      if (y == 0 || q > best) best = q;
    }
    return best;
  }

  double flat_action(SymbolString& ys, SymbolString& xs, Symbol y, std::size_t k, double reward,
                     double log_base) const {
    ys.push_back(y);
    double q = 0.0;
    for (int x = 0; x < percepts; ++x) {
      xs.push_back(static_cast<Symbol>(x));
      // A zero-mass prefix has only zero-mass extensions.
      if (rho.log_joint(xs, ys) != kNegInf) {
        q += flat(ys, xs, k - 1, reward + space.reward(static_cast<Symbol>(x)), log_base);
      }
      xs.pop_back();
    }
    ys.pop_back();
    return q;
  }

  double count(SymbolString& ys, SymbolString& xs, std::size_t k) const {
    if (k == 0) return 1.0;
    double total = 0.0;
    for (int y = 0; y < actions; ++y) {
      ys.push_back(static_cast<Symbol>(y));
      const auto p = rho.conditional(xs, ys);
      double product = 1.0;
      for (int x = 0; x < percepts; ++x) {
        if (p[x] <= 0.0) continue;
        xs.push_back(static_cast<Symbol>(x));
        product *= count(ys, xs, k - 1);
        xs.pop_back();
      }
      ys.pop_back();
      total += product;
    }
    return total;
  }

  // Expected reward of every policy of the subtree after (ys, xs) that
  // starts with action y.
  std::vector<double> policies_starting(SymbolString& ys, SymbolString& xs, Symbol y, std::size_t k) const {
    ys.push_back(y);
    const auto p = rho.conditional(xs, ys);
    std::vector<double> combos{0.0};
    for (int x = 0; x < percepts; ++x) {
      if (p[x] <= 0.0) continue;
      xs.push_back(static_cast<Symbol>(x));
      const auto child = policies(ys, xs, k - 1);
      xs.pop_back();
      const double r = space.reward(static_cast<Symbol>(x));
      std::vector<double> next;
      next.reserve(combos.size() * child.size());
      for (double c : combos) {
        for (double v : child) next.push_back(c + p[x] * (r + v));
      }
      combos = std::move(next);
    }
    ys.pop_back();
    return combos;
  }

  std::vector<double> policies(SymbolString& ys, SymbolString& xs, std::size_t k) const {
    if (k == 0) return {0.0};
    std::vector<double> out;
    for (int y = 0; y < actions; ++y) {
      auto part = policies_starting(ys, xs, static_cast<Symbol>(y), k);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
};

// Fans the first cycle out over (action, percept) pairs; each pair's subtree
// is evaluated independently and reduced in a fixed order.
template <typename Subtree>
std::vector<double> root_action_values(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space,
                                       SymbolView actions, SymbolView percepts, std::size_t horizon,
                                       Subtree&& subtree) {
  // Shallow trees are cheaper than starting threads.
  const int workers = horizon >= 3 ? default_workers() : 1;
  const int na = rho.side_alphabet().size();
  const int nx = space.size();
  const auto values = parallel_map<double>(static_cast<std::size_t>(na * nx), [&](std::size_t i) {
    SymbolString ys(actions.begin(), actions.end());
    SymbolString xs(percepts.begin(), percepts.end());
    ys.push_back(static_cast<Symbol>(i / nx));
    return subtree(ys, xs, static_cast<Symbol>(i % nx));
  }, workers);
  std::vector<double> out(static_cast<std::size_t>(na), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) out[i / nx] += values[i];
  return out;
}

}  // namespace

Plan expectimax(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space, SymbolView actions,
                SymbolView percepts, std::size_t horizon, double max_nodes) {
  check_model(rho, space, actions, percepts);
  if (horizon == 0) throw InvalidArgument("expectimax: horizon must be >= 1");
  check_nodes(rho, horizon, max_nodes);
  const Tree tree{rho, space, rho.side_alphabet().size(), space.size()};
  Plan plan;
  plan.action_values = root_action_values(rho, space, actions, percepts, horizon, [&](SymbolString& ys, SymbolString& xs,
                                                                             Symbol x) {
    const double p = rho.conditional(xs, ys)[x];
    if (p <= 0.0) return 0.0;
    xs.push_back(x);
    return p * (space.reward(x) + tree.value(ys, xs, horizon - 1));
  });
  plan.action = pick(plan.action_values);
  plan.value = plan.action_values[plan.action];
  for (double v : plan.action_values) plan.value = std::max(plan.value, v);
  return plan;
}

Plan flat_expectimax(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space, SymbolView actions,
                     SymbolView percepts, std::size_t horizon, double max_nodes) {
  check_model(rho, space, actions, percepts);
  if (horizon == 0) throw InvalidArgument("expectimax: horizon must be >= 1");
  check_nodes(rho, horizon, max_nodes);
  const double log_base = rho.log_joint(percepts, actions);
  if (log_base == kNegInf) throw ConditioningOnNull("expectimax: the history has model mass zero");
  const Tree tree{rho, space, rho.side_alphabet().size(), space.size()};
  Plan plan;
  plan.action_values = root_action_values(rho, space, actions, percepts, horizon, [&](SymbolString& ys, SymbolString& xs,
                                                                             Symbol x) {
    xs.push_back(x);
    if (rho.log_joint(xs, ys) == kNegInf) return 0.0;
    return tree.flat(ys, xs, horizon - 1, space.reward(x), log_base);
  });
  plan.action = pick(plan.action_values);
  plan.value = plan.action_values[plan.action];
  for (double v : plan.action_values) plan.value = std::max(plan.value, v);
  return plan;
}

double policy_count(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space, SymbolView actions,
                    SymbolView percepts, std::size_t horizon) {
  check_model(rho, space, actions, percepts);
  const Tree tree{rho, space, rho.side_alphabet().size(), space.size()};
  SymbolString ys(actions.begin(), actions.end());
  SymbolString xs(percepts.begin(), percepts.end());
  return tree.count(ys, xs, horizon);
}

PolicySearchResult brute_force_policy_value(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space,
                                            std::size_t horizon, double max_policies, SymbolView actions,
                                            SymbolView percepts) {
  if (horizon == 0) throw InvalidArgument("policy search: horizon must be >= 1");
  const double count = policy_count(rho, space, actions, percepts, horizon);
  if (count > max_policies) {
    throw CapExceeded("policy enumeration over " + std::to_string(count) + " policies exceeds the cap of " +
                      std::to_string(max_policies));
  }
  const Tree tree{rho, space, rho.side_alphabet().size(), space.size()};
  PolicySearchResult result;
  std::vector<double> best_by_action;
  for (int y = 0; y < rho.side_alphabet().size(); ++y) {
    SymbolString ys(actions.begin(), actions.end());
    SymbolString xs(percepts.begin(), percepts.end());
    const auto values = tree.policies_starting(ys, xs, static_cast<Symbol>(y), horizon);
    result.policies += values.size();
    double best = values.front();
    for (double v : values) best = std::max(best, v);
    best_by_action.push_back(best);
  }
  result.best_first_action = pick(best_by_action);
  result.best_value = best_by_action[result.best_first_action];
  for (double v : best_by_action) result.best_value = std::max(result.best_value, v);
  return result;
}

double HistoryTrace::mean_reward(std::size_t from_cycle, std::size_t to_cycle) const {
  if (from_cycle < 1 || to_cycle < from_cycle || to_cycle > steps.size()) {
    throw InvalidArgument("mean_reward: cycle range outside the trace");
  }
  double total = 0.0;
  for (std::size_t t = from_cycle; t <= to_cycle; ++t) total += steps[t - 1].reward;
  return total / static_cast<double>(to_cycle - from_cycle + 1);
}

HistoryTrace run_episode(const sideinfo::ChronologicalModel& environment, const PerceptSpace& space,
                         const AgentSpec& agent, std::size_t cycles, std::uint64_t seed) {
  if (!agent.model) throw InvalidArgument("run_episode: agent has no model");
  if (agent.horizon == 0 && agent.mode == HorizonMode::kReceding) {
    throw InvalidArgument("run_episode: horizon must be >= 1");
  }
  if (environment.alphabet().size() != space.size() || agent.model->alphabet().size() != space.size()) {
    throw InvalidArgument("run_episode: environment, agent model and percept space disagree on |X|");
  }
  if (environment.side_alphabet() != agent.model->side_alphabet()) {
    throw InvalidArgument("run_episode: environment and agent model disagree on the action set");
  }
  Rng rng = Rng(seed).split("environment");
  HistoryTrace trace;
  SymbolString ys;
  SymbolString xs;
  sideinfo::ChronologicalPtr model = agent.model;
  for (std::size_t t = 1; t <= cycles; ++t) {
    const std::size_t k = agent.mode == HorizonMode::kReceding ? agent.horizon : cycles - t + 1;
    // The conditioned model plans from an empty past.
    const Plan plan = expectimax(*model, space, {}, {}, k);
    ys.push_back(static_cast<Symbol>(plan.action));
    const auto dist = environment.conditional(xs, ys);
    const double u = rng.uniform();
    double acc = 0.0;
    Symbol x = 0;
    bool chosen = false;
    for (std::size_t a = 0; a < dist.size(); ++a) {
      if (dist[a] <= 0.0) continue;
      x = static_cast<Symbol>(a);
      acc += dist[a];
      if (u < acc) {
        chosen = true;
        break;
      }
    }
    if (!chosen && acc <= 0.0) throw ConditioningOnNull("run_episode: environment has no percept with positive mass");
    xs.push_back(x);

    HistoryStep step;
    step.t = t;
    step.action = plan.action;
    step.percept = x;
    step.observation = space.observation(x);
    step.reward = space.reward(x);
    step.planned_value = plan.value;
    if (agent.posterior_of) step.posterior = agent.posterior_of->posterior(xs, ys);
    trace.total_reward += step.reward;
    trace.steps.push_back(std::move(step));

    const Symbol y_last = ys.back();
    model = model->conditioned(SymbolView(&x, 1), SymbolView(&y_last, 1));
  }
  return trace;
}

}  // namespace unilearn::agent
