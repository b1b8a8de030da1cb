#include <doctest.h>

#include <cmath>

#include "unilearn/description.hpp"

using namespace unilearn;
using namespace unilearn::desc;

namespace {

const std::vector<std::string> kSamples{
    "bernoulli(1/3)",
    "bernoulli(0.9)",
    "bernoulli(1)",
    "categorical(1/2,1/4,1/4)",
    "markov(1;9/10,1/10;1/5,4/5)",
    "markov(2;1/2,1/2;1/2,1/2;1/10,9/10;1,0)",
    "kt(3)",
    "step(7)",
    "periodic(3;0120)",
    "binexp(5;3)",
    "radix(11;3)",
    "cond_iid(9/10,1/10;1/10,9/10)",
    "cond_markov(2;1/2,1/2;1/3,2/3;1,0;0,1)",
};

// floor(log2 n) + 2 floor(log2(floor(log2 n) + 1)) + 1
std::size_t delta_length(std::uint64_t n) {
  const auto l = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n))));
  const auto ll = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(l + 1))));
  return l + 2 * ll + 1;
}

}  // namespace

TEST_CASE("rationals") {
  CHECK(parse_rational("2/6") == Rational{1, 3});
  CHECK(parse_rational("0.25") == Rational{1, 4});
  CHECK(parse_rational("1") == Rational{1, 1});
  CHECK(parse_rational("0") == Rational{0, 1});
  CHECK(parse_rational("1/3").str() == "1/3");
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational("-1/2"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational("3/2"), InvalidArgument);
}

TEST_CASE("text and binary forms round-trip") {
  for (const auto& s : kSamples) {
    const auto d = parse_description(s);
    CHECK(parse_description(to_text(d)) == d);
    const auto bits = serialize(d);
    CHECK(deserialize(bits) == d);
    CHECK(description_length(d) == bits.size());
  }
  CHECK(parse_description(" bernoulli ( 1 / 3 ) ") == parse_description("bernoulli(1/3)"));
}

TEST_CASE("the binary form is prefix-free") {
  std::vector<Bits> codes;
  for (const auto& s : kSamples) codes.push_back(serialize(parse_description(s)));
  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t j = 0; j < codes.size(); ++j) {
      if (i == j) continue;
      const bool prefix = codes[i].size() <= codes[j].size() &&
                          std::equal(codes[i].begin(), codes[i].end(), codes[j].begin());
      CHECK_FALSE(prefix);
    }
  }
  Bits stream;
  for (const auto& c : codes) stream.insert(stream.end(), c.begin(), c.end());
  std::size_t pos = 0;
  for (const auto& s : kSamples) CHECK(deserialize(stream, pos) == parse_description(s));
  CHECK(pos == stream.size());
}

TEST_CASE("malformed descriptions are rejected") {
  for (const char* bad : {"bernoulli", "bernoulli(1/2;1/2)", "categorical(1/2,1/3)", "markov(1;1/2,1/2)",
                          "periodic(2;012)", "binexp(8;3)", "cond_markov(2;1/2,1/2)", "gaussian(0)", "kt(1)"}) {
    CHECK_THROWS_AS(parse_description(bad), InvalidArgument);
  }
  Bits truncated = serialize(parse_description("markov(1;9/10,1/10;1/5,4/5)"));
  truncated.resize(truncated.size() - 3);
  CHECK_THROWS_AS(deserialize(truncated), InvalidArgument);
}

TEST_CASE("built models") {
  const auto third = build_semimeasure(parse_description("bernoulli(1/3)"));
  CHECK(third->joint(SymbolString{1, 0}) == doctest::Approx(2.0 / 9.0));
  const auto m = build_semimeasure(parse_description("markov(1;9/10,1/10;1/5,4/5)"));
  CHECK(m->joint(SymbolString{1, 1}) == doctest::Approx(0.1 * 0.8));
  const auto seq = build_sequence(parse_description("periodic(3;0120)"));
  CHECK(seq->has_prefix(SymbolString{0, 1, 2, 0, 0, 1}));
  CHECK(is_deterministic(parse_description("step(2)")));
  CHECK(is_conditional(parse_description("cond_iid(1/2,1/2)")));
  CHECK_THROWS_AS(build_semimeasure(parse_description("cond_iid(1/2,1/2)")), InvalidArgument);
  const auto c = build_chronological(parse_description("cond_iid(9/10,1/10;1/10,9/10)"));
  CHECK(c->side_alphabet().size() == 2);
  CHECK(std::exp(c->log_joint(SymbolString{0, 1}, SymbolString{0, 1})) == doctest::Approx(0.81));
}

TEST_CASE("Elias-delta codes") {
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    Bits bits;
    elias_delta_encode(n, bits);
    CHECK(bits.size() == elias_delta_length(n));
    CHECK(bits.size() == delta_length(n));
    std::size_t pos = 0;
    CHECK(elias_delta_decode(bits, pos) == n);
    CHECK(pos == bits.size());
  }
  CHECK_THROWS_AS(elias_delta_length(0), InvalidArgument);
}

TEST_CASE("universal and index weights") {
  // equal-length codes: 1/3 and 2/3 both cost delta(2 or 3) + delta(3)
  const auto w = universal_weights({parse_description("bernoulli(1/3)"), parse_description("bernoulli(2/3)")});
  CHECK(w[0] == w[1]);

  std::vector<ModelDescription> all;
  for (const auto& s : kSamples) all.push_back(parse_description(s));
  double total = 0.0;
  for (double v : universal_weights(all)) total += v;
  CHECK(total <= 1.0);
  CHECK_THROWS_AS(universal_weights({all[0], all[0]}), InvalidArgument);

  const auto iw = index_weights(1000);
  double index_total = 0.0;
  for (double v : iw) index_total += v;
  CHECK(index_total <= 1.0);

  // Code length against log i + 2 log log i: least-squares slope near 1, and
  // the length never strays more than a few bits from the curve.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = 999;
  for (std::size_t i = 2; i <= 1000; ++i) {
    const double x = std::log2(static_cast<double>(i)) + 2.0 * std::log2(std::log2(static_cast<double>(i)) + 1.0);
    const double y = -std::log2(iw[i - 1]);
    CHECK(std::fabs(y - x) <= 3.0);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}
