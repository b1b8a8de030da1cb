#pragma once

// Toy AIXI: expectimax planning over a chronological environment model,
// a policy-enumeration oracle, and an agent/environment episode loop.
//
// Actions are side symbols y, percepts are symbols x = o * R + r over
// observations o < O and reward levels r < R; the reward of x is r / (R - 1).

#include <optional>
#include <string>
#include <vector>

#include "unilearn/sideinfo.hpp"

namespace unilearn::agent {

class PerceptSpace {
 public:
  PerceptSpace(int observations, int reward_levels);

  int observations() const { return observations_; }
  int reward_levels() const { return reward_levels_; }
  int size() const { return observations_ * reward_levels_; }

  Symbol encode(int observation, int reward_level) const;
  int observation(Symbol x) const { return static_cast<int>(x) / reward_levels_; }
  int reward_level(Symbol x) const { return static_cast<int>(x) % reward_levels_; }
  double reward(Symbol x) const;

 private:
  int observations_;
  int reward_levels_;
};

/// Default ceiling on expectimax tree nodes and on enumerated policies.
inline constexpr double kMaxPlanNodes = 1e6;

struct Plan {
  std::size_t action = 0;
  double value = 0.0;               // expected reward over the remaining horizon
  std::vector<double> action_values;
};

/// Planning values within this distance of the best count as ties; ties go
/// to the smallest action index.
inline constexpr double kTieTolerance = 1e-12;

/// V(h, k) = max_y sum_x rho(x | h, y) (r(x) + V(h y x, k - 1)), V(h, 0) = 0.
/// Percepts of zero model mass contribute nothing. `actions` and `percepts`
/// are the past y_{<t} and x_{<t} (equal lengths).
Plan expectimax(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space, SymbolView actions,
                SymbolView percepts, std::size_t horizon, double max_nodes = kMaxPlanNodes);

/// The same value written as one nested max/sum whose leaves carry the
/// summed reward times rho(x_{1:m} | y_{1:m}) / rho(x_{<t} | y_{<t}); no
/// per-step conditionals are formed.
Plan flat_expectimax(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space, SymbolView actions,
                     SymbolView percepts, std::size_t horizon, double max_nodes = kMaxPlanNodes);

struct PolicySearchResult {
  std::uint64_t policies = 0;
  double best_value = 0.0;
  std::size_t best_first_action = 0;
};

/// Number of deterministic policies over the positive-mass histories reachable
/// from the given past within `horizon` cycles (as a double; may be huge).
double policy_count(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space, SymbolView actions,
                    SymbolView percepts, std::size_t horizon);

/// Scores every deterministic policy (one action for every reachable
/// positive-mass history) by its exact expected reward and returns the best.
/// Throws CapExceeded above max_policies.
PolicySearchResult brute_force_policy_value(const sideinfo::ChronologicalModel& rho, const PerceptSpace& space,
                                            std::size_t horizon, double max_policies = kMaxPlanNodes,
                                            SymbolView actions = {}, SymbolView percepts = {});

enum class HorizonMode {
  kReceding,  // plan `horizon` cycles ahead at every step
  kLifetime,  // plan to the end of the episode (horizon = cycles left)
};

struct AgentSpec {
  sideinfo::ChronologicalPtr model;
  std::size_t horizon = 1;
  HorizonMode mode = HorizonMode::kReceding;
  /// Optional mixture whose posterior is recorded in the trace.
  std::shared_ptr<const sideinfo::ConditionalMixture> posterior_of;
};

struct HistoryStep {
  std::size_t t = 0;
  std::size_t action = 0;
  Symbol percept = 0;
  int observation = 0;
  double reward = 0.0;
  double planned_value = 0.0;
  std::vector<double> posterior;
};

struct HistoryTrace {
  std::vector<HistoryStep> steps;
  double total_reward = 0.0;
  double mean_reward(std::size_t from_cycle, std::size_t to_cycle) const;  // 1-based, inclusive
};

/// Alternates planned actions and percepts sampled from the environment
/// mu(. | x_{<t}, y_{1:t}). Reproducible from the seed.
HistoryTrace run_episode(const sideinfo::ChronologicalModel& environment, const PerceptSpace& space,
                         const AgentSpec& agent, std::size_t cycles, std::uint64_t seed);

}  // namespace unilearn::agent
