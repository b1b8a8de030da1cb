#include <doctest.h>

#include <cmath>
#include <set>

#include "unilearn/det_learners.hpp"
#include "unilearn/monotone_vm.hpp"
#include "unilearn/rng.hpp"

using namespace unilearn;
using namespace unilearn::det;

namespace {

HypothesisClass step_family(std::size_t n, bool inverse_square = false) {
  auto make = [](std::size_t i) { return step_sequence(i); };
  if (inverse_square) return HypothesisClass::lazy(n, make, inverse_square_weight);
  return HypothesisClass::lazy(n, make, [n](std::size_t) { return 1.0 / static_cast<double>(n); });
}

// N distinct finite binary sequences of length `len`, each printed by an
// assembled program of OUT / INC,OUT tokens.
std::vector<SequencePtr> vm_family(std::size_t n, std::size_t len, std::uint64_t seed) {
  Rng rng(seed);
  std::set<SymbolString> seen;
  std::vector<SequencePtr> out;
  while (out.size() < n) {
    std::vector<std::string> tokens;
    for (std::size_t t = 0; t < len; ++t) {
      if (rng.bit()) tokens.push_back("INC");
      tokens.push_back("OUT");
    }
    auto seq = vm::program_sequence(vm::assemble(tokens), 1000, len);
    SymbolString prefix;
    for (std::size_t t = 0; t < len; ++t) prefix.push_back(*seq->at(t));
    if (seen.insert(prefix).second) out.push_back(seq);
  }
  return out;
}

// Truth stays consistent, and the checks every learner shares.
void check_trace_basics(const HypothesisClass& cls, std::size_t truth_index, const LearnerTrace& trace) {
  std::size_t errors = 0;
  for (const auto& s : trace.steps) {
    CHECK(cls.at(truth_index).at(s.t - 1) == s.truth);
    CHECK(s.consistent_after >= 1);
    CHECK(s.consistent_after <= s.consistent_before);
    errors += s.error ? 1 : 0;
  }
  CHECK(errors == trace.errors);
}

}  // namespace

TEST_CASE("enumeration learner on the step family") {
  const auto cls = step_family(50);
  const auto trace = enumeration_learner(cls, cls.at(7), 100);
  CHECK(trace.errors == 6);
  check_trace_basics(cls, 7, trace);
  CHECK(enumeration_learner(cls, cls.at(1), 100).errors == 0);
  for (std::size_t m = 1; m <= 50; ++m) CHECK(enumeration_learner(cls, cls.at(m), 60).errors == m - 1);
}

TEST_CASE("enumeration learner errors eliminate the selected hypothesis") {
  const auto cls = HypothesisClass::uniform(vm_family(10, 16, 7));
  const auto trace = enumeration_learner(cls, cls.at(4), 16);
  CHECK(trace.errors <= 3);
  std::size_t previous = 0;
  for (const auto& s : trace.steps) {
    CHECK(s.selected >= previous);
    previous = s.selected;
    if (s.error) CHECK(cls.at(s.selected).at(s.t - 1) != s.truth);
  }
  check_trace_basics(cls, 4, trace);
}

TEST_CASE("majority learner halves the consistent set at every error") {
  for (int n = 1; n <= 6; ++n) {
    const std::size_t size = (std::size_t{1} << n) - 1;
    const auto cls = HypothesisClass::lazy(
        size, [n](std::size_t i) { return binary_expansion_sequence(i - 1, n); },
        [size](std::size_t) { return 1.0 / static_cast<double>(size); });
    for (std::size_t m = 1; m <= size; ++m) {
      const auto trace = majority_learner(cls, cls.at(m), static_cast<std::size_t>(n) + 2);
      CHECK(trace.errors <= static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(size)))));
      for (const auto& s : trace.steps) {
        if (s.error) CHECK(2 * s.consistent_after <= s.consistent_before);
      }
      check_trace_basics(cls, m, trace);
    }
  }
  const auto single = HypothesisClass::uniform({step_sequence(3)});
  CHECK(majority_learner(single, single.at(1), 10).errors == 0);

  const auto random = HypothesisClass::uniform(vm_family(8, 12, 3));
  const auto trace = majority_learner(random, random.at(3), 12);
  CHECK(trace.errors <= 3);
  for (const auto& s : trace.steps) {
    if (s.error) CHECK(2 * s.consistent_after <= s.consistent_before);
  }
}

TEST_CASE("weighted majority with inverse-square weights") {
  const auto cls = step_family(200, true);
  for (std::size_t m = 1; m <= 200; ++m) {
    const auto trace = weighted_majority_learner(cls, cls.at(m), 205);
    CHECK(static_cast<double>(trace.errors) <= 2.0 * std::log2(static_cast<double>(m) + 1.0));
    CHECK(static_cast<double>(trace.errors) <= weighted_majority_bound(cls.weight(m), 2) + 1e-9);
    for (const auto& s : trace.steps) {
      if (s.error) CHECK(s.weight_after <= s.weight_before * 0.5 + 1e-15);
    }
  }
}

TEST_CASE("weighted majority on a ternary family") {
  const auto cls = HypothesisClass::lazy(
      200, [](std::size_t i) { return radix_sequence(i - 1, Alphabet(3)); }, inverse_square_weight);
  const auto trace = weighted_majority_learner(cls, cls.at(10), 8);
  CHECK(weighted_majority_bound(cls.weight(10), 3) == doctest::Approx(std::log(121.0) / std::log(1.5)));
  CHECK(trace.errors <= 11);
  for (const auto& s : trace.steps) {
    if (s.error) CHECK(s.weight_after <= s.weight_before * (2.0 / 3.0) + 1e-15);
  }
  check_trace_basics(cls, 10, trace);
}

TEST_CASE("uniform weighted majority reproduces majority") {
  const auto cls = HypothesisClass::uniform(vm_family(16, 12, 11));
  for (std::size_t m = 1; m <= cls.size(); ++m) {
    const auto a = majority_learner(cls, cls.at(m), 12);
    const auto b = weighted_majority_learner(cls, cls.at(m), 12);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t t = 0; t < a.steps.size(); ++t) CHECK(a.steps[t].prediction == b.steps[t].prediction);
  }
}

TEST_CASE("consistent weight") {
  const std::size_t n = 100;
  const auto cls = step_family(n, true);
  double all = 0.0;
  double from2 = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    all += 1.0 / ((i + 1.0) * (i + 1.0));
    if (i >= 2) from2 += 1.0 / ((i + 1.0) * (i + 1.0));
  }
  CHECK(consistent_weight(cls, SymbolString{}).total == doctest::Approx(all).epsilon(1e-14));
  const auto w = consistent_weight(cls, SymbolString{1, 1});
  CHECK(w.total == doctest::Approx(from2).epsilon(1e-14));
  CHECK(w.by_symbol[0] == doctest::Approx(1.0 / 9.0));
  CHECK(consistent_weight(cls, SymbolString{0, 1}).total == 0.0);
}

TEST_CASE("realizability is enforced") {
  const auto cls = step_family(5);
  CHECK_THROWS_AS(enumeration_learner(cls, *step_sequence(9), 20), RealizabilityViolation);
  CHECK_THROWS_AS(HypothesisClass({step_sequence(1), step_sequence(2)}, {0.7, 0.7}), InvalidArgument);
  const auto ternary = HypothesisClass::uniform({radix_sequence(1, Alphabet(3))});
  CHECK_THROWS_AS(majority_learner(ternary, ternary.at(1), 3), InvalidArgument);
}
