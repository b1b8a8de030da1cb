#pragma once

// Deterministic (possibly finite) symbol sequences. These are both the
// hypotheses of the deterministic learners and the generators behind
// DeterministicSequenceModel.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "unilearn/core.hpp"

namespace unilearn {

class SymbolSequence {
 public:
  virtual ~SymbolSequence() = default;

  virtual Alphabet alphabet() const = 0;

  /// Symbol at zero-based position t, or nullopt if the sequence ended
  /// before t. Must return the same answer for repeated queries.
  virtual std::optional<Symbol> at(std::size_t t) const = 0;

  /// Finite sequences report their length; infinite ones nullopt.
  virtual std::optional<std::size_t> length() const { return std::nullopt; }

  virtual std::string describe() const = 0;

  /// Whether the first x.size() symbols equal x.
  bool has_prefix(SymbolView x) const;
};

using SequencePtr = std::shared_ptr<const SymbolSequence>;

/// 1^count 0^inf (over any alphabet; symbol 1 repeated, then zeros).
SequencePtr step_sequence(std::size_t count, Alphabet alphabet = Alphabet(2));

/// Binary digits after the point of numerator / 2^bits, then zeros.
SequencePtr binary_expansion_sequence(std::uint64_t numerator, int bits);

/// Base-|X| digits of value, least significant first, followed by zeros.
SequencePtr radix_sequence(std::uint64_t value, Alphabet alphabet);

/// pattern repeated forever.
SequencePtr periodic_sequence(SymbolString pattern, Alphabet alphabet);

/// Finite sequence: exactly the given symbols, then nothing.
SequencePtr finite_sequence(SymbolString symbols, Alphabet alphabet);

SequencePtr function_sequence(std::function<Symbol(std::size_t)> fn, Alphabet alphabet,
                              std::string description);

}  // namespace unilearn
