#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracle.hpp"
#include "unilearn/decision.hpp"
#include "unilearn/det_learners.hpp"

using namespace unilearn;
using namespace unilearn::decision;

namespace {

SemimeasurePtr bern(double theta) { return std::make_shared<BernoulliModel>(theta); }

// X = {sun, rain}, Y = {sunglasses, umbrella}
LossMatrix weather() { return LossMatrix({{0.0, 0.1}, {1.0, 0.3}}, {"sunglasses", "umbrella"}); }

std::shared_ptr<bayes::BayesMixture> mixture(std::vector<SemimeasurePtr> members, std::vector<double> w) {
  return std::make_shared<bayes::BayesMixture>(std::move(members), std::move(w));
}

}  // namespace

TEST_CASE("sunglasses or umbrella") {
  const auto loss = weather();
  for (int i = 0; i <= 1000; ++i) {
    const double rain = i / 1000.0;
    const std::vector<double> p{1.0 - rain, rain};
    const auto y = bayes_decision(p, loss);
    if (rain < 0.125) CHECK(y == 0);
    if (rain > 0.125) CHECK(y == 1);
  }
  // one ulp on either side of the threshold
  const double below = std::nextafter(0.125, 0.0);
  const double above = std::nextafter(0.125, 1.0);
  CHECK(bayes_decision(std::vector<double>{1.0 - below, below}, loss) == 0);
  CHECK(bayes_decision(std::vector<double>{1.0 - above, above}, loss) == 1);
  // At exactly 1/8 both decisions cost 1/8; the smallest index wins.
  const LambdaRho at(bern(0.125), loss);
  const auto e = at.expected_losses({});
  CHECK(e[0] == e[1]);
  CHECK(at.decide({}) == 0);
}

TEST_CASE("0-1 loss predicts the most likely symbol") {
  const auto kt = std::make_shared<KTModel>(Alphabet(3));
  const LambdaRho lambda(kt, LossMatrix::zero_one(3));
  for (std::size_t n = 0; n <= 4; ++n) {
    for (const auto& x : oracle::strings(3, n)) {
      const auto p = kt->conditional(x);
      std::size_t best = 0;
      for (std::size_t a = 1; a < 3; ++a) {
        if (p[a] > p[best]) best = a;
      }
      CHECK(lambda.decide(x) == best);
    }
  }
}

TEST_CASE("a dominating column wins for every belief") {
  const LossMatrix loss({{0.5, 0.2, 0.9}, {0.7, 0.6, 0.8}});
  for (int i = 0; i <= 100; ++i) {
    const double q = i / 100.0;
    CHECK(bayes_decision(std::vector<double>{1.0 - q, q}, loss) == 1);
  }
}

TEST_CASE("exact cumulative losses") {
  const LossMatrix zero({{0.0, 0.0}, {0.0, 0.0}});
  CHECK(exact_cumulative_loss(LambdaRho(bern(0.3), zero), BernoulliModel(0.3), zero, 10) == 0.0);

  const auto mu = bern(0.9);
  const LambdaRho lambda_mu(mu, LossMatrix::zero_one(2));
  CHECK(exact_cumulative_loss(lambda_mu, *mu, LossMatrix::zero_one(2), 10) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(31);
  const auto xi = mixture({bern(0.2), bern(0.6), bern(0.9)}, {0.3, 0.3, 0.4});
  const auto ref_xi = oracle::mixture_joint(
      {oracle::bernoulli_joint(0.2), oracle::bernoulli_joint(0.6), oracle::bernoulli_joint(0.9)}, {0.3, 0.3, 0.4});
  for (int trial = 0; trial < 5; ++trial) {
    const auto loss = LossMatrix::random(rng, 2, 3);
    for (std::size_t m = 0; m < 3; ++m) {
      const double theta = m == 0 ? 0.2 : (m == 1 ? 0.6 : 0.9);
      const double l_xi = exact_cumulative_loss(LambdaRho(xi, loss), xi->member(m), loss, 9);
      const double l_mu = exact_cumulative_loss(LambdaRho(xi->member_ptr(m), loss), xi->member(m), loss, 9);
      CHECK(l_xi == doctest::Approx(oracle::bayes_act_loss(ref_xi, oracle::bernoulli_joint(theta), loss.rows(), 2, 9))
                        .epsilon(1e-12));
      CHECK(l_mu <= l_xi + 1e-12);
    }
  }
}

TEST_CASE("regret bound") {
  const auto single = mixture({bern(0.7)}, {1.0});
  const auto r0 = regret_bound_check(*single, 0, LossMatrix::zero_one(2), 10);
  CHECK(r0.regret == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r0.holds());

  const auto coins = mixture({bern(1.0 / 3.0), bern(2.0 / 3.0)}, {0.5, 0.5});
  const auto r = regret_bound_check(*coins, 1, LossMatrix::zero_one(2), 12);
  CHECK(r.bound == doctest::Approx(std::sqrt(2.0 * std::log(2.0))));
  CHECK(r.bound == doctest::Approx(1.177).epsilon(1e-3));
  CHECK(r.margin >= 0.0);
  CHECK(r.loss_xi <= r.ratio_ceiling);

  Rng rng(1234);
  const auto three = mixture({bern(0.15), bern(0.5),
                              std::make_shared<MarkovModel>(1, std::vector<std::vector<double>>{{0.8, 0.2}, {0.3, 0.7}})},
                             {0.25, 0.25, 0.5});
  for (int trial = 0; trial < 20; ++trial) {
    const auto loss = LossMatrix::random(rng, 2, 3);
    for (std::size_t m = 0; m < three->size(); ++m) {
      const auto rep = regret_bound_check(*three, m, loss, 10);
      CHECK(rep.margin >= 0.0);
      CHECK(rep.holds());
      CHECK(rep.loss_mu <= rep.loss_xi + 1e-12);
    }
  }
}

TEST_CASE("0-1 Lambda_xi over a deterministic class is the majority learner") {
  std::vector<SequencePtr> seqs;
  std::vector<SemimeasurePtr> members;
  for (std::uint64_t i = 0; i < 15; ++i) {
    seqs.push_back(binary_expansion_sequence(i, 4));
    members.push_back(std::make_shared<DeterministicSequenceModel>(seqs.back()));
  }
  const auto xi = mixture(members, bayes::uniform_weights(15));
  const LambdaRho lambda(xi, LossMatrix::zero_one(2));
  const auto cls = det::HypothesisClass::uniform(seqs);
  for (std::size_t m = 1; m <= 15; ++m) {
    const auto trace = det::majority_learner(cls, cls.at(m), 6);
    SymbolString h;
    for (const auto& s : trace.steps) {
      CHECK(lambda.decide(h) == s.prediction);
      h.push_back(s.truth);
    }
  }
}

TEST_CASE("pareto check") {
  const auto coins = mixture({bern(0.3), bern(0.8)}, {0.5, 0.5});
  const auto loss = LossMatrix::zero_one(2);
  std::vector<StrategyPtr> challengers{
      std::make_shared<LambdaRho>(coins, loss, "xi"),
      std::make_shared<LambdaRho>(coins->member_ptr(0), loss, "nu0"),
      std::make_shared<LambdaRho>(coins->member_ptr(1), loss, "nu1"),
      std::make_shared<ConstantStrategy>(0),
      std::make_shared<ConstantStrategy>(1),
  };
  const auto report = pareto_check(*coins, loss, 8, challengers);
  CHECK_FALSE(report.violation_found);
  REQUIRE(report.entries.size() == challengers.size());
  const auto& self = report.entries[0];
  CHECK_FALSE(self.better_somewhere);
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    if (e.better_somewhere) CHECK(e.worse_somewhere);
    for (std::size_t m = 0; m < 2; ++m) {
      CHECK(e.losses[m] == doctest::Approx(exact_cumulative_loss(*challengers[i], coins->member(m), loss, 8)));
    }
  }
  // Lambda_nu is at least as good as Lambda_xi inside nu.
  CHECK(report.entries[1].losses[0] <= report.lambda_xi_losses[0] + 1e-12);
  CHECK(report.entries[2].losses[1] <= report.lambda_xi_losses[1] + 1e-12);
}

TEST_CASE("Lambda_mu beats every deterministic strategy") {
  struct Case {
    int x, y;
    std::size_t n;
    double cap;
  };
  Rng rng(77);
  for (const auto& c : {Case{2, 2, 1, 1e6}, Case{2, 2, 3, 1e6}, Case{2, 2, 4, 1e6}, Case{3, 2, 3, 1e6},
                        Case{2, 3, 3, 1e6}, Case{3, 3, 3, 2e6}}) {
    std::vector<double> probs(c.x);
    double total = 0.0;
    for (auto& p : probs) total += (p = 0.1 + rng.uniform());
    for (auto& p : probs) p /= total;
    const auto mu = c.x == 2 ? std::make_shared<MarkovModel>(1, std::vector<std::vector<double>>{{0.7, 0.3}, {0.4, 0.6}})
                             : SemimeasurePtr(std::make_shared<CategoricalModel>(probs));
    const auto loss = LossMatrix::random(rng, c.x, c.y);
    const double lambda = exact_cumulative_loss(LambdaRho(mu, loss), *mu, loss, c.n);
    const auto search = exhaustive_strategy_search(*mu, loss, c.n, lambda, 1e-12, c.cap);
    CHECK(search.strategies == static_cast<std::uint64_t>(strategy_count(c.x, c.y, c.n)));
    CHECK(search.below == 0);
    CHECK(search.min_loss == doctest::Approx(lambda).epsilon(1e-12));
    const TableStrategy best(c.x, search.argmin);
    CHECK(exact_cumulative_loss(best, *mu, loss, c.n) == doctest::Approx(search.min_loss).epsilon(1e-12));
  }
  CHECK(strategy_count(2, 2, 5) == std::ldexp(1.0, 31));
  CHECK_THROWS_AS(exhaustive_strategy_search(BernoulliModel(0.5), LossMatrix::zero_one(2), 5, 0.0), CapExceeded);
}

TEST_CASE("strategy search finds strategies that beat a bad threshold") {
  const BernoulliModel mu(0.8);
  const auto loss = LossMatrix::zero_one(2);
  const double always_zero = exact_cumulative_loss(ConstantStrategy(0), mu, loss, 3);
  CHECK(always_zero == doctest::Approx(2.4));
  const auto search = exhaustive_strategy_search(mu, loss, 3, always_zero);
  // Choosing 1 anywhere lowers the loss, so every other table is strictly better.
  CHECK(search.below == search.strategies - 1);
  CHECK(search.min_loss == doctest::Approx(0.6));
}

TEST_CASE("loss grids") {
  const auto w = weather();
  const auto parsed = LossMatrix::parse_grid(w.to_grid());
  CHECK(parsed.rows() == w.rows());
  CHECK(parsed.decision_labels() == w.decision_labels());
  const auto c = LossMatrix::parse_grid("# comment\n0, 0.5\n1\t0.25\n");
  CHECK(c.at(1, 1) == 0.25);
  Rng rng(3);
  const auto r = LossMatrix::random(rng, 3, 4);
  CHECK(LossMatrix::parse_grid(r.to_grid()).rows() == r.rows());
  CHECK_THROWS_AS(LossMatrix::parse_grid("0 1\n0.5\n"), InvalidArgument);
  CHECK_THROWS_AS(LossMatrix::parse_grid("0 1\n0.5 1.5\n"), InvalidArgument);
  CHECK_THROWS_AS(LossMatrix::parse_grid("0 x\n1 0\n"), InvalidArgument);
  CHECK(TableStrategy::history_index(2, SymbolString{}) == 0);
  CHECK(TableStrategy::history_index(2, SymbolString{1}) == 2);
  CHECK(TableStrategy::history_index(3, SymbolString{1, 2}) == 4 + 5);
}
