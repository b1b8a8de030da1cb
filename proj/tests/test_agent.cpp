#include <doctest.h>

#include <cmath>
#include <memory>

#include "unilearn/agent.hpp"
#include "unilearn/rng.hpp"

using namespace unilearn;
using namespace unilearn::agent;
using sideinfo::ChronologicalPtr;
using sideinfo::ConditionalIID;
using sideinfo::ConditionalMixture;

namespace {

using Table = std::vector<std::vector<double>>;

// Guess heads (0) or tails (1); the observation is the coin, reward 1 for a
// correct guess. Percept x = coin * 2 + reward.
ChronologicalPtr coin(double heads) {
  return std::make_shared<ConditionalIID>(Table{{0, heads, 1 - heads, 0}, {heads, 0, 0, 1 - heads}});
}

std::shared_ptr<ConditionalMixture> coin_mixture() {
  return std::make_shared<ConditionalMixture>(std::vector<ChronologicalPtr>{coin(0.9), coin(0.1)},
                                              std::vector<double>{0.5, 0.5});
}

Table random_table(Rng& rng, int rows, int cols) {
  Table t(rows, std::vector<double>(cols));
  for (auto& row : t) {
    double total = 0.0;
    for (auto& v : row) total += (v = rng.uniform() + 0.05);
    for (auto& v : row) v /= total;
  }
  return t;
}

// mu-expected reward of re-planning with rho at every node, remaining horizon k.
double planned_policy_value(const sideinfo::ChronologicalModel& rho, const sideinfo::ChronologicalModel& mu,
                            const PerceptSpace& space, SymbolString& ys, SymbolString& xs, std::size_t k) {
  if (k == 0) return 0.0;
  const auto plan = expectimax(rho, space, ys, xs, k);
  ys.push_back(static_cast<Symbol>(plan.action));
  const auto p = mu.conditional(xs, ys);
  double v = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0.0) continue;
    xs.push_back(static_cast<Symbol>(x));
    v += p[x] * (space.reward(static_cast<Symbol>(x)) + planned_policy_value(rho, mu, space, ys, xs, k - 1));
    xs.pop_back();
  }
  ys.pop_back();
  return v;
}

}  // namespace

TEST_CASE("percept space") {
  const PerceptSpace s(3, 5);
  CHECK(s.size() == 15);
  CHECK(s.encode(2, 4) == 14);
  CHECK(s.observation(14) == 2);
  CHECK(s.reward(s.encode(1, 2)) == 0.5);
  CHECK_THROWS_AS(PerceptSpace(2, 1), InvalidArgument);
  CHECK_THROWS_AS(s.encode(3, 0), InvalidArgument);
}

TEST_CASE("horizon one is the myopic Bayes act") {
  Rng rng(12);
  const PerceptSpace space(2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const ConditionalIID mu(random_table(rng, 3, 4));
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t y = 0; y < 3; ++y) {
      double v = 0.0;
      for (Symbol x = 0; x < 4; ++x) v += mu.table()[y][x] * space.reward(x);
      if (v > best_v) {
        best = y;
        best_v = v;
      }
    }
    const auto plan = expectimax(mu, space, {}, {}, 1);
    CHECK(plan.action == best);
    CHECK(plan.value == doctest::Approx(best_v).epsilon(1e-14));
    CHECK(flat_expectimax(mu, space, {}, {}, 1).action == best);
  }
}

TEST_CASE("a rewarding action is picked at every depth") {
  // action 1 always pays, action 0 never does; percepts are the reward level
  const ConditionalIID env(Table{{1, 0}, {0, 1}});
  const PerceptSpace space(1, 2);
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto plan = expectimax(env, space, {}, {}, k);
    CHECK(plan.action == 1);
    CHECK(plan.value == doctest::Approx(static_cast<double>(k)));
  }
}

TEST_CASE("expectimax equals policy enumeration on the coin game") {
  const auto mix = coin_mixture();
  const PerceptSpace space(2, 2);
  const auto plan = expectimax(*mix, space, {}, {}, 3);
  const auto brute = brute_force_policy_value(*mix, space, 3);
  CHECK(std::fabs(plan.value - brute.best_value) <= 1e-12);
  CHECK(plan.action == brute.best_first_action);
  CHECK(brute.policies == static_cast<std::uint64_t>(policy_count(*mix, space, {}, {}, 3)));
  // The game is symmetric: both first guesses are worth the same.
  CHECK(plan.action == 0);
  CHECK(plan.action_values[0] == doctest::Approx(plan.action_values[1]).epsilon(1e-14));

  // from a non-empty past
  const SymbolString ys{0, 0};
  const SymbolString xs{1, 2};
  const auto p2 = expectimax(*mix, space, ys, xs, 2);
  const auto b2 = brute_force_policy_value(*mix, space, 2, kMaxPlanNodes, ys, xs);
  CHECK(std::fabs(p2.value - b2.best_value) <= 1e-12);
  CHECK(p2.action == b2.best_first_action);
}

TEST_CASE("expectimax equals policy enumeration on random environments") {
  Rng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const int actions = 2 + static_cast<int>(rng.below(2));
    const PerceptSpace space(1 + static_cast<int>(rng.below(2)), 2);
    const auto a = std::make_shared<ConditionalIID>(random_table(rng, actions, space.size()));
    const auto b = std::make_shared<ConditionalIID>(random_table(rng, actions, space.size()));
    const ConditionalMixture mix({a, b}, {0.3, 0.7});
    const std::size_t horizon = space.size() == 2 && actions == 2 ? 3 : 2;
    const auto plan = expectimax(mix, space, {}, {}, horizon);
    const auto brute = brute_force_policy_value(mix, space, horizon);
    CHECK(std::fabs(plan.value - brute.best_value) <= 1e-12);
    CHECK(plan.action == brute.best_first_action);
  }
  CHECK_THROWS_AS(brute_force_policy_value(*coin_mixture(), PerceptSpace(2, 2), 6), CapExceeded);
  CHECK_THROWS_AS(expectimax(*coin_mixture(), PerceptSpace(2, 2), {}, {}, 11), CapExceeded);
}

TEST_CASE("recursive and flat expectimax agree on measures") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const PerceptSpace space(1, 2);
    const auto env = std::make_shared<sideinfo::ConditionalMarkov>(2, random_table(rng, 4, 2));
    const ConditionalMixture mix({env, std::make_shared<ConditionalIID>(random_table(rng, 2, 2))}, {0.5, 0.5});
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto r = expectimax(mix, space, {}, {}, k);
      const auto f = flat_expectimax(mix, space, {}, {}, k);
      CHECK(std::fabs(r.value - f.value) <= 1e-12);
      CHECK(r.action == f.action);
    }
  }
}

TEST_CASE("constant rewards make every policy tie") {
  // the reward level is always 1 of {0, 1, 2}
  const ConditionalIID env(Table{{0, 1, 0}, {0, 1, 0}});
  const PerceptSpace space(1, 3);
  const auto plan = expectimax(env, space, {}, {}, 4);
  CHECK(plan.value == doctest::Approx(2.0));
  CHECK(plan.action == 0);
  const auto brute = brute_force_policy_value(env, space, 4);
  CHECK(brute.best_value == doctest::Approx(2.0));
  CHECK(brute.best_first_action == 0);
}

TEST_CASE("mixture planning never beats informed planning") {
  const auto mix = coin_mixture();
  const PerceptSpace space(2, 2);
  for (std::size_t truth = 0; truth < 2; ++truth) {
    const auto& mu = mix->member(truth);
    for (std::size_t k = 1; k <= 4; ++k) {
      SymbolString ys, xs;
      const double mixed = planned_policy_value(*mix, mu, space, ys, xs, k);
      const double informed = expectimax(mu, space, {}, {}, k).value;
      CHECK(mixed <= informed + 1e-12);
    }
  }
}

TEST_CASE("episodes") {
  const auto mix = coin_mixture();
  const PerceptSpace space(2, 2);
  const auto env = coin(0.9);

  AgentSpec informed{env, 1, HorizonMode::kReceding, nullptr};
  const auto ti = run_episode(*env, space, informed, 1000, 7);
  const double sigma = std::sqrt(0.9 * 0.1 / 1000.0);
  CHECK(std::fabs(ti.mean_reward(1, 1000) - 0.9) <= 3 * sigma);

  AgentSpec learner{mix, 2, HorizonMode::kReceding, mix};
  const auto tm = run_episode(*env, space, learner, 1000, 7);
  CHECK(std::fabs(tm.mean_reward(1, 1000) - ti.mean_reward(1, 1000)) <= 0.05);
  CHECK(tm.steps.back().posterior[0] > 0.999999);

  // reproducible from the seed
  const auto again = run_episode(*env, space, learner, 200, 7);
  for (std::size_t t = 0; t < 200; ++t) CHECK(again.steps[t].percept == tm.steps[t].percept);

  const ConditionalIID dead(Table{{1, 0}, {1, 0}});
  AgentSpec any{std::make_shared<ConditionalIID>(Table{{1, 0}, {1, 0}}), 2, HorizonMode::kReceding, nullptr};
  CHECK(run_episode(dead, PerceptSpace(1, 2), any, 50, 1).total_reward == 0.0);
}

TEST_CASE("lifetime planning in a known deterministic environment collects the planned value") {
  // action y pays reward level y; the best plan takes action 2 throughout
  const auto env = std::make_shared<ConditionalIID>(Table{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const PerceptSpace space(1, 3);
  AgentSpec spec{env, 0, HorizonMode::kLifetime, nullptr};
  const auto trace = run_episode(*env, space, spec, 6, 3);
  CHECK(trace.total_reward == doctest::Approx(trace.steps.front().planned_value).epsilon(1e-14));
  CHECK(trace.total_reward == doctest::Approx(6.0));
  AgentSpec receding{env, 2, HorizonMode::kReceding, nullptr};
  const auto r = run_episode(*env, space, receding, 6, 3);
  for (const auto& s : r.steps) CHECK(s.planned_value == doctest::Approx(2.0));
}
