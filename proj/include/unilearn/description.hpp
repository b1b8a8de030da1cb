#pragma once

// Model-description language.
//
// Text form (whitespace-insensitive, used in configs):
//
//   bernoulli(P)                       P(1) = P
//   categorical(P0,P1,...,Pk-1)        i.i.d., probabilities sum to 1 exactly
//   markov(K; ROW; ROW; ...)           order K, |X|^K rows of |X| probabilities
//   kt(A)                              add-half estimator over A symbols
//   step(I)                            1^I 0^inf
//   periodic(A; DIGITS)                DIGITS repeated forever, alphabet A
//   binexp(NUM; BITS)                  binary digits of NUM/2^BITS, then zeros
//   radix(VALUE; A)                    base-A digits of VALUE, LSB first, then zeros
//   cond_iid(ROW; ROW; ...)            one row per side symbol
//   cond_markov(S; ROW; ...)           S side symbols; row index prev*S + y
//
// A probability P is a rational "p/q", a terminating decimal or 0/1; it is
// stored exactly, so row sums are checked without rounding.
//
// Binary form: Elias-delta(family tag + 1) followed by the parameters, each
// integer n >= 0 written as Elias-delta(n + 1) and each probability p/q as
// Elias-delta(p + 1) Elias-delta(q). Counts precede the data they size, so
// the code is prefix-free and 2^-length is a valid prior weight.

#include <cstdint>
#include <string>
#include <vector>

#include "unilearn/det_learners.hpp"
#include "unilearn/models.hpp"
#include "unilearn/sideinfo.hpp"

namespace unilearn::desc {

using Bits = std::vector<bool>;

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// "1/3", "0.25", "1". Reduced to lowest terms; rejects negatives, q = 0 and values above 1.
Rational parse_rational(const std::string& text);

enum class Family : std::uint8_t {
  kBernoulli,
  kCategorical,
  kMarkov,
  kKT,
  kStep,
  kPeriodic,
  kBinaryExpansion,
  kRadix,
  kConditionalIID,
  kConditionalMarkov,
};

const char* family_name(Family f);

struct ModelDescription {
  Family family = Family::kBernoulli;
  int alphabet = 2;
  int side = 1;        // side alphabet size for conditional families
  std::uint64_t a = 0;  // order / count / value / numerator, depending on family
  std::uint64_t b = 0;  // bits (binexp)
  SymbolString pattern;
  std::vector<std::vector<Rational>> rows;

  friend bool operator==(const ModelDescription&, const ModelDescription&) = default;
};

ModelDescription parse_description(const std::string& text);
std::string to_text(const ModelDescription& d);

Bits serialize(const ModelDescription& d);
ModelDescription deserialize(const Bits& bits);
/// Reads one description starting at `pos` and advances it.
ModelDescription deserialize(const Bits& bits, std::size_t& pos);

/// Length in bits of the binary form: the complexity surrogate K-hat.
std::size_t description_length(const ModelDescription& d);

bool is_conditional(const ModelDescription& d);
bool is_deterministic(const ModelDescription& d);

SemimeasurePtr build_semimeasure(const ModelDescription& d);
SequencePtr build_sequence(const ModelDescription& d);
/// Conditional families as themselves; unconditional ones ignore a trivial
/// side alphabet of the given size.
sideinfo::ChronologicalPtr build_chronological(const ModelDescription& d, int side_size = 1);

void elias_delta_encode(std::uint64_t n, Bits& out);
std::uint64_t elias_delta_decode(const Bits& bits, std::size_t& pos);
std::size_t elias_delta_length(std::uint64_t n);

/// w_nu = 2^-description_length(nu). Duplicate descriptions are rejected:
/// Kraft only bounds the sum over distinct codewords.
std::vector<double> universal_weights(const std::vector<ModelDescription>& models);

/// w_i = 2^-elias_delta_length(i) for i = 1..n.
std::vector<double> index_weights(std::size_t n);

}  // namespace unilearn::desc
