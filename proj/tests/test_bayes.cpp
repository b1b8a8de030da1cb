#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracle.hpp"
#include "unilearn/bayes.hpp"

using namespace unilearn;
using namespace unilearn::bayes;

namespace {

SemimeasurePtr bern(double theta) { return std::make_shared<BernoulliModel>(theta); }

BayesMixture two_coins() { return BayesMixture({bern(1.0 / 3.0), bern(2.0 / 3.0)}, {0.5, 0.5}); }

}  // namespace

TEST_CASE("mixture predictive and posterior examples") {
  const auto mix = two_coins();
  CHECK(mixture_predictive(mix, SymbolString{}, 1) == doctest::Approx(0.5).epsilon(1e-15));
  const auto post = posterior(mix, SymbolString{1});
  // (1/2 * 2/3) / (1/2 * 1/3 + 1/2 * 2/3)
  CHECK(post[1] == doctest::Approx((0.5 * 2.0 / 3.0) / (0.5 / 3.0 + 0.5 * 2.0 / 3.0)).epsilon(1e-15));
  CHECK(post[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const BayesMixture coins({bern(0.5), bern(0.9)}, uniform_weights(2));
  const auto p = posterior(coins, SymbolString{1, 1, 1});
  CHECK(p[1] == doctest::Approx(0.729 / 0.854).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.85363).epsilon(1e-5));
}

TEST_CASE("a singleton mixture is its member") {
  const auto kt = std::make_shared<KTModel>(Alphabet(3));
  const BayesMixture one({kt}, {0.25});
  for (const auto& x : oracle::strings(3, 4)) {
    for (Symbol a = 0; a < 3; ++a) {
      CHECK(mixture_predictive(one, x, a) == doctest::Approx(predictive(*kt, x, a)).epsilon(1e-13));
    }
  }
}

TEST_CASE("posterior edge cases") {
  const BayesMixture mix({bern(0.2), bern(0.7)}, {0.2, 0.3});
  const auto prior = posterior(mix, SymbolString{});
  CHECK(prior[0] == doctest::Approx(0.4));
  CHECK(prior[1] == doctest::Approx(0.6));

  const BayesMixture det({std::make_shared<DeterministicSequenceModel>(step_sequence(1)),
                          std::make_shared<DeterministicSequenceModel>(step_sequence(2)),
                          std::make_shared<DeterministicSequenceModel>(step_sequence(3))},
                         uniform_weights(3));
  const auto p = posterior(det, SymbolString{1, 1, 0});
  CHECK(p == std::vector<double>{0.0, 1.0, 0.0});
  CHECK_THROWS_AS(posterior(det, SymbolString{0, 1}), ConditioningOnNull);
  CHECK_THROWS_AS(mixture_predictive(det, SymbolString{0, 1}, 0), ConditioningOnNull);

  CHECK_THROWS_AS(BayesMixture({bern(0.5), bern(0.6)}, {0.6, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(BayesMixture({bern(0.5)}, {0.0}), InvalidArgument);
  CHECK_THROWS_AS(BayesMixture({bern(0.5), std::make_shared<KTModel>(Alphabet(3))}, {0.5, 0.5}), InvalidArgument);
}

TEST_CASE("mixture joint equals the weighted sum") {
  const BayesMixture mix({bern(0.1), bern(0.5), bern(0.85)}, {0.2, 0.5, 0.3});
  const auto ref = oracle::mixture_joint(
      {oracle::bernoulli_joint(0.1), oracle::bernoulli_joint(0.5), oracle::bernoulli_joint(0.85)}, {0.2, 0.5, 0.3});
  for (std::size_t n = 0; n <= 6; ++n) {
    for (const auto& x : oracle::strings(2, n)) CHECK(mix.joint(x) == doctest::Approx(ref(x)).epsilon(1e-13));
  }
  CHECK(mix.is_measure());
}

TEST_CASE("dominance to depth 10") {
  const BayesMixture mix({bern(0.1), bern(0.5), std::make_shared<KTModel>(Alphabet(2)),
                          std::make_shared<DeterministicSequenceModel>(periodic_sequence({0, 1}, Alphabet(2)))},
                         {0.1, 0.2, 0.3, 0.4});
  std::size_t violations = 0;
  for (std::size_t n = 0; n <= 10; ++n) {
    for_each_string(2, n, [&](SymbolView x) {
      const double xi = mix.log_joint(x);
      for (std::size_t i = 0; i < mix.size(); ++i) {
        if (std::log(mix.weight(i)) + mix.member(i).log_joint(x) > xi + 1e-12) ++violations;
      }
    });
  }
  CHECK(violations == 0);
}

TEST_CASE("expected log posterior of the truth does not decrease") {
  const BayesMixture mix({bern(0.2), bern(0.5), bern(0.8)}, uniform_weights(3));
  for (std::size_t truth = 0; truth < 3; ++truth) {
    const double theta = truth == 0 ? 0.2 : (truth == 1 ? 0.5 : 0.8);
    double previous = -1e300;
    for (std::size_t n = 0; n <= 10; ++n) {
      double e = 0.0;
      for (const auto& x : oracle::strings(2, n)) {
        e += oracle::bernoulli(theta, x) * std::log(posterior(mix, x)[truth]);
      }
      CHECK(e >= previous - 1e-12);
      previous = e;
    }
  }
}

TEST_CASE("sequential posterior updates match recomputation") {
  const BayesMixture mix({bern(0.3), std::make_shared<KTModel>(Alphabet(2)),
                          std::make_shared<MarkovModel>(1, std::vector<std::vector<double>>{{0.6, 0.4}, {0.1, 0.9}})},
                         {0.5, 0.25, 0.25});
  const SymbolString stream{1, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 1};
  auto post = posterior(mix, SymbolString{});
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const SymbolView past(stream.data(), t);
    post = update_posterior(mix, post, past, stream[t]);
    const auto fresh = posterior(mix, SymbolView(stream.data(), t + 1));
    for (std::size_t i = 0; i < post.size(); ++i) CHECK(std::fabs(std::log(post[i]) - std::log(fresh[i])) <= 1e-12);
  }
}
