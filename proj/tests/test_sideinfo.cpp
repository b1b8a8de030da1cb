#include <doctest.h>

#include <cmath>
#include <memory>

#include "unilearn/bayes.hpp"
#include "unilearn/rng.hpp"
#include "unilearn/sideinfo.hpp"

using namespace unilearn;
using namespace unilearn::sideinfo;

namespace {

using Table = std::vector<std::vector<double>>;

ChronologicalPtr agree(double p) { return std::make_shared<ConditionalIID>(Table{{p, 1 - p}, {1 - p, p}}); }

std::shared_ptr<ConditionalMixture> zoo_mixture() {
  return std::make_shared<ConditionalMixture>(
      std::vector<ChronologicalPtr>{
          agree(0.9), agree(0.2),
          std::make_shared<ConditionalMarkov>(2, Table{{0.5, 0.5}, {0.9, 0.1}, {0.3, 0.7}, {0.1, 0.9}}),
          std::make_shared<IgnoreSide>(std::make_shared<KTModel>(Alphabet(2)), SideAlphabet(2))},
      std::vector<double>{0.4, 0.2, 0.2, 0.2});
}

SymbolString random_string(Rng& rng, int k, std::size_t n) {
  SymbolString s(n);
  for (auto& v : s) v = static_cast<Symbol>(rng.below(static_cast<std::uint64_t>(k)));
  return s;
}

// Every value computed from (x_{1:n}, y_{1:n}) with y extended by five
// arbitrary symbols must not depend on the extension.
void check_chronology(const ChronologicalModel& model, Rng& rng, std::size_t max_n, int trials) {
  const int kx = model.alphabet().size();
  const int ky = model.side_alphabet().size();
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = rng.below(max_n + 1);
    const auto x = random_string(rng, kx, n);
    auto y = random_string(rng, ky, n + 5);
    const double joint = model.log_joint(x, y);
    SymbolString y_next(y.begin(), y.begin() + static_cast<long>(n + 1));
    std::vector<double> next;
    if (joint != kNegInf) next = model.conditional(x, y_next);
    for (int p = 0; p < 4; ++p) {
      auto z = y;
      for (std::size_t t = n; t < n + 5; ++t) z[t] = static_cast<Symbol>(rng.below(static_cast<std::uint64_t>(ky)));
      CHECK(model.log_joint(x, z) == joint);
      if (joint != kNegInf) {
        // y_{n+1} is part of the query here, later symbols are not
        auto z_next = z;
        z_next[n] = y[n];
        z_next.resize(n + 1);
        CHECK(model.conditional(x, z_next) == next);
        const auto future = model.conditioned(x, z);
        const auto again = model.conditioned(x, y);
        const SymbolString x2{0};
        const SymbolString y2{1};
        CHECK(future->log_joint(x2, y2) == again->log_joint(x2, y2));
      }
    }
  }
}

}  // namespace

TEST_CASE("a trivial side alphabet reduces to the unconditional mixture") {
  auto b1 = std::make_shared<BernoulliModel>(0.2);
  auto b2 = std::make_shared<BernoulliModel>(0.7);
  const ConditionalMixture cond({std::make_shared<IgnoreSide>(b1), std::make_shared<IgnoreSide>(b2)}, {0.3, 0.7});
  const bayes::BayesMixture plain({b1, b2}, {0.3, 0.7});
  for (std::size_t n = 0; n <= 6; ++n) {
    for_each_string(2, n, [&](SymbolView x) {
      const SymbolString y(n + 1, 0);
      CHECK(cond.log_joint(x, SymbolView(y).first(n)) == doctest::Approx(plain.log_joint(x)).epsilon(1e-14));
      CHECK(conditional_predictive(cond, x, y, 1) ==
            doctest::Approx(bayes::mixture_predictive(plain, x, 1)).epsilon(1e-13));
    });
  }
}

TEST_CASE("posterior after matched pairs") {
  const ConditionalMixture mix({agree(0.9), agree(0.1)}, {0.5, 0.5});
  const SymbolString y{1, 0, 0, 1, 1};
  const auto post = mix.posterior(y, y);
  const double a = std::pow(0.9, 5);
  const double b = std::pow(0.1, 5);
  CHECK(post[0] == doctest::Approx(a / (a + b)).epsilon(1e-14));
}

TEST_CASE("chronology holds for every model in the zoo") {
  Rng rng(404);
  const auto mix = zoo_mixture();
  for (std::size_t i = 0; i < mix->size(); ++i) check_chronology(mix->member(i), rng, 8, 40);
  check_chronology(*mix, rng, 8, 40);
  const auto m = std::make_shared<ConditionalApproxM>(Alphabet(2), SideAlphabet(2), vm::Budget{12, 60});
  check_chronology(*m, rng, 3, 15);
}

TEST_CASE("conditional machine") {
  const vm::Budget b{12, 60};
  const vm::MachineConfig four{Alphabet(2), vm::OpcodeWidth::kFourBit};
  // Without a side tape READ_Y faults, so a side stream only adds programs.
  for (std::size_t n = 0; n <= 2; ++n) {
    const SymbolString y(n, 0);
    for_each_string(2, n, [&](SymbolView x) {
      CHECK(conditional_approx_M(x, y, b) == vm::approx_M(x, b, four, &y));
      CHECK(conditional_approx_M(x, y, b) >= vm::approx_M(x, b, four, nullptr));
    });
  }
  CHECK(conditional_approx_M(SymbolString{}, SymbolString{}, b) == vm::approx_M(SymbolString{}, b, four));

  const SymbolString y{1, 0, 1};
  for (std::size_t n = 1; n <= 3; ++n) {
    double total = 0.0;
    for_each_string(2, n, [&](SymbolView x) { total += conditional_approx_M(x, y, {10, 60}); });
    CHECK(total <= 1.0);
  }

  // READ_Y OUT READ_Y OUT: copies two side symbols in 16 bits.
  const auto copy = vm::assemble({"READ_Y", "OUT", "READ_Y", "OUT"}, vm::OpcodeWidth::kFourBit);
  for (const auto& ys : {SymbolString{0, 0}, SymbolString{0, 1}, SymbolString{1, 0}, SymbolString{1, 1}}) {
    CHECK(conditional_approx_M(ys, ys, {16, 50}) >= std::ldexp(1.0, -static_cast<int>(copy.size())));
  }
}

TEST_CASE("conditional mixture dominates its members") {
  const auto mix = zoo_mixture();
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.below(10);
    const auto x = random_string(rng, 2, n);
    const auto y = random_string(rng, 2, n);
    const double xi = mix->log_joint(x, y);
    for (std::size_t i = 0; i < mix->size(); ++i) {
      CHECK(std::log(mix->weights()[i]) + mix->member(i).log_joint(x, y) <= xi + 1e-12);
    }
  }
}

TEST_CASE("online classification") {
  // labelers x = y and x = 1 - y
  const ConditionalMixture mix({agree(1.0), agree(0.0)}, {0.5, 0.5});
  const SymbolString y{0, 1, 1, 0, 1, 0, 0, 1};
  SymbolString x = y;
  for (auto& v : x) v = 1 - v;
  const auto trace = online_classify(mix, y, x);
  CHECK(trace.steps.front().log_loss == doctest::Approx(std::log(2.0)));
  for (std::size_t t = 1; t < trace.steps.size(); ++t) CHECK(trace.steps[t].log_loss == 0.0);
  CHECK(trace.cumulative_log_loss == doctest::Approx(std::log(2.0)));

  // constant side stream: the same as predicting with the y = 0 rows alone
  const ConditionalMixture two({std::make_shared<ConditionalIID>(Table{{0.3, 0.7}, {0.5, 0.5}}),
                                std::make_shared<ConditionalIID>(Table{{0.8, 0.2}, {0.1, 0.9}})},
                               {0.5, 0.5});
  const bayes::BayesMixture plain({std::make_shared<BernoulliModel>(0.7), std::make_shared<BernoulliModel>(0.2)},
                                  {0.5, 0.5});
  const SymbolString xs{1, 1, 0, 1, 0, 0, 1};
  const auto c = online_classify(two, SymbolString(xs.size(), 0), xs);
  for (std::size_t t = 0; t < xs.size(); ++t) {
    CHECK(c.steps[t].predictive[1] ==
          doctest::Approx(bayes::mixture_predictive(plain, SymbolView(xs).first(t), 1)).epsilon(1e-13));
  }
}

TEST_CASE("per side stream bound") {
  const ConditionalMixture mix(
      {agree(0.9), agree(0.4),
       std::make_shared<ConditionalMarkov>(2, Table{{0.5, 0.5}, {0.9, 0.1}, {0.3, 0.7}, {0.1, 0.9}})},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  for (std::size_t m = 0; m < 3; ++m) {
    for (auto f : {prediction::Functional::kSquared, prediction::Functional::kRelativeEntropy}) {
      const auto r = side_bound_check(mix, m, 10, f);
      CHECK(r.streams == 1024);
      CHECK(r.holds);
      CHECK(r.bound == doctest::Approx(std::log(3.0)));
      CHECK(r.worst_value <= std::log(3.0) + 1e-9);
    }
  }
}

TEST_CASE("conditioned models continue the past") {
  const auto mix = zoo_mixture();
  const SymbolString x{1, 0, 1};
  const SymbolString y{0, 1, 1};
  const auto future = mix->conditioned(x, y);
  const SymbolString x2{1, 1};
  const SymbolString y2{0, 1};
  SymbolString xx = x, yy = y;
  xx.insert(xx.end(), x2.begin(), x2.end());
  yy.insert(yy.end(), y2.begin(), y2.end());
  CHECK(future->log_joint(x2, y2) == doctest::Approx(mix->log_joint(xx, yy) - mix->log_joint(x, y)).epsilon(1e-13));
  const ConditionalMixture det({agree(1.0)}, {1.0});
  CHECK_THROWS_AS(det.conditioned(SymbolString{1}, SymbolString{0}), ConditioningOnNull);
  CHECK_THROWS_AS(mix->log_joint(SymbolString{1, 1}, SymbolString{0}), InvalidArgument);
}
