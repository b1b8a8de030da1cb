#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracle.hpp"
#include "unilearn/models.hpp"
#include "unilearn/parallel.hpp"
#include "unilearn/rng.hpp"
#include "unilearn/semimeasure.hpp"
#include "unilearn/sequences.hpp"

using namespace unilearn;

namespace {

// joint(empty) = 0.5 but joint(0) = joint(1) = 0.4: superadditive at the root.
class BrokenModel final : public Semimeasure {
 public:
  Alphabet alphabet() const override { return Alphabet(2); }
  double log_joint(SymbolView x) const override {
    if (x.empty()) return std::log(0.5);
    return std::log(0.4) + static_cast<double>(x.size() - 1) * std::log(0.5);
  }
};

std::vector<SemimeasurePtr> zoo() {
  return {
      std::make_shared<BernoulliModel>(0.3),
      std::make_shared<BernoulliModel>(1.0),
      std::make_shared<CategoricalModel>(std::vector<double>{0.2, 0.3, 0.5}),
      std::make_shared<MarkovModel>(1, std::vector<std::vector<double>>{{0.9, 0.1}, {0.2, 0.8}}),
      std::make_shared<MarkovModel>(2, std::vector<std::vector<double>>(9, {0.5, 0.25, 0.25})),
      std::make_shared<KTModel>(Alphabet(2)),
      std::make_shared<KTModel>(Alphabet(3)),
      std::make_shared<DeterministicSequenceModel>(periodic_sequence({1, 0, 2}, Alphabet(3))),
  };
}

}  // namespace

TEST_CASE("semimeasure check") {
  const auto fair = check_semimeasure(BernoulliModel(0.5), 6);
  CHECK(fair.passed);
  CHECK(fair.worst_violation <= 1e-15);

  const DeterministicSequenceModel ones(periodic_sequence({1}, Alphabet(2)));
  CHECK(check_semimeasure(ones, 6).passed);

  const auto broken = check_semimeasure(BrokenModel(), 4);
  CHECK_FALSE(broken.passed);
  CHECK(broken.worst_violation == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(broken.worst_at.empty());

  // A finite sequence loses its mass after the end: a semimeasure, not a measure.
  const DeterministicSequenceModel finite(finite_sequence({1, 1}, Alphabet(2)));
  CHECK(check_semimeasure(finite, 5).passed);
  CHECK_FALSE(finite.is_measure());
}

TEST_CASE("predictive examples") {
  const SymbolString x11{1, 1};
  CHECK(predictive(BernoulliModel(0.9), x11, 1) == doctest::Approx(0.9).epsilon(1e-15));
  // add-half rule counted by hand: (2 + 1/2) / (2 + 2/2)
  CHECK(predictive(KTModel(Alphabet(2)), x11, 1) == doctest::Approx(2.5 / 3.0).epsilon(1e-15));
  const DeterministicSequenceModel alt(periodic_sequence({1, 0}, Alphabet(2)));
  CHECK(predictive(alt, SymbolString{1, 0}, 1) == 1.0);
  CHECK_THROWS_AS(predictive(alt, SymbolString{1, 1}, 0), ConditioningOnNull);
  CHECK_THROWS_AS(alt.conditional(SymbolString{0}), ConditioningOnNull);
}

TEST_CASE("kt joint matches sequential counts") {
  const KTModel kt(Alphabet(2));
  for (const auto& x : oracle::strings(2, 7)) {
    double p = 1.0;
    double counts[2] = {0, 0};
    for (std::size_t t = 0; t < x.size(); ++t) {
      p *= (counts[x[t]] + 0.5) / (static_cast<double>(t) + 1.0);
      counts[x[t]] += 1;
    }
    CHECK(kt.joint(x) == doctest::Approx(p).epsilon(1e-13));
  }
}

TEST_CASE("markov chain starts from the all-zero context") {
  const MarkovModel m(1, {{0.9, 0.1}, {0.2, 0.8}});
  CHECK(m.joint(SymbolString{1}) == doctest::Approx(0.1));
  CHECK(m.joint(SymbolString{1, 1, 0}) == doctest::Approx(0.1 * 0.8 * 0.2));
  const MarkovModel m2(2, {{0.5, 0.5}, {0.1, 0.9}, {0.3, 0.7}, {0.6, 0.4}});
  // contexts: 00 -> row 0, 01 -> row 1, 11 -> row 3
  CHECK(m2.joint(SymbolString{1, 1, 0}) == doctest::Approx(0.5 * 0.9 * 0.6));
}

TEST_CASE("zoo measures normalize and obey the chain rule") {
  for (const auto& model : zoo()) {
    const int k = model->alphabet().size();
    const int depth = k == 2 ? 8 : 7;
    double worst_sum = 0.0;
    double worst_chain = 0.0;
    for (int len = 0; len <= depth; ++len) {
      for_each_string(k, static_cast<std::size_t>(len), [&](SymbolView x) {
        if (model->log_joint(x) == kNegInf) return;
        if (model->is_measure()) {
          const auto c = model->conditional(x);
          double s = 0.0;
          for (double v : c) s += v;
          worst_sum = std::max(worst_sum, std::fabs(s - 1.0));
        }
        double chain = 1.0;
        for (std::size_t t = 0; t < x.size(); ++t) chain *= predictive(*model, x.subspan(0, t), x[t]);
        worst_chain = std::max(worst_chain, std::fabs(chain - model->joint(x)));
      });
    }
    CHECK(worst_sum <= 1e-12);
    CHECK(worst_chain <= 1e-12);
    CHECK(check_semimeasure(*model, 6).passed);
  }
}

TEST_CASE("log-space helpers") {
  CHECK(log_add(kNegInf, kNegInf) == kNegInf);
  CHECK(log_add(std::log(0.25), kNegInf) == doctest::Approx(std::log(0.25)));
  CHECK(log_add(std::log(0.25), std::log(0.5)) == doctest::Approx(std::log(0.75)));
  // 1000 halvings underflow in linear space but not here
  const BernoulliModel half(0.5);
  const SymbolString long_x(1000, 1);
  CHECK(half.log_joint(long_x) == doctest::Approx(-1000.0 * std::log(2.0)));
  const std::vector<double> terms{std::log(0.1), std::log(0.2), kNegInf, std::log(0.3)};
  CHECK(log_sum(terms) == doctest::Approx(std::log(0.6)));
}

TEST_CASE("alphabets and symbol strings") {
  CHECK_THROWS_AS(Alphabet(1), InvalidArgument);
  CHECK(SideAlphabet(1).size() == 1);
  CHECK(parse_symbols("0120", 3) == SymbolString{0, 1, 2, 0});
  CHECK_THROWS_AS(parse_symbols("012", 2), InvalidArgument);
  CHECK_THROWS_AS(parse_symbols("0a", 2), InvalidArgument);
  CHECK(format_symbols(SymbolString{1, 0, 12}) == "10[12]");
  std::size_t count = 0;
  for_each_string(3, 4, [&](SymbolView) { ++count; });
  CHECK(count == 81);
  for_each_string(2, 0, [&](SymbolView x) { CHECK(x.empty()); });
}

TEST_CASE("sequences") {
  const auto step = step_sequence(3);
  CHECK(*step->at(2) == 1);
  CHECK(*step->at(3) == 0);
  CHECK(step->has_prefix(SymbolString{1, 1, 1, 0, 0}));
  // 5/8 = 0.101
  const auto be = binary_expansion_sequence(5, 3);
  CHECK(be->has_prefix(SymbolString{1, 0, 1, 0, 0}));
  // 11 in base 3, least significant first: 2, 0, 1
  const auto rx = radix_sequence(11, Alphabet(3));
  CHECK(rx->has_prefix(SymbolString{2, 0, 1, 0}));
  const auto fin = finite_sequence({1, 0}, Alphabet(2));
  CHECK(fin->length() == 2u);
  CHECK_FALSE(fin->at(2).has_value());
  CHECK_FALSE(fin->has_prefix(SymbolString{1, 0, 0}));
}

TEST_CASE("rng substreams and parallel_map are deterministic") {
  const Rng root(42);
  CHECK(root.split("a").seed() == Rng(42).split("a").seed());
  CHECK(root.split("a").seed() != root.split("b").seed());
  CHECK(root.split(1).seed() != root.split(2).seed());
  Rng r = root.split("draws");
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7u);
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
  auto square = [](std::size_t i) { return static_cast<double>(i) * 0.1 * static_cast<double>(i); };
  CHECK(parallel_map<double>(500, square, 1) == parallel_map<double>(500, square, 8));
  CHECK_THROWS_AS(parallel_map<int>(
                      10, [](std::size_t i) -> int { if (i == 7) throw InvalidArgument("boom"); return 0; }, 4),
                  InvalidArgument);
}
