#pragma once

// Alphabets, symbol strings and the error types shared by every module.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace unilearn {

using Symbol = std::uint32_t;
using SymbolString = std::vector<Symbol>;
using SymbolView = std::span<const Symbol>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Raised when a predictive quantity is requested for a history of mass zero.
class ConditioningOnNull : public Error {
 public:
  using Error::Error;
};

// The consistent set of a deterministic learner became empty: the true
// sequence was not in the class.
class RealizabilityViolation : public Error {
 public:
  using Error::Error;
};

// An exhaustive computation was asked to exceed its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class Alphabet {
 public:
  explicit Alphabet(int size) : size_(size) {
    if (size < 2) throw InvalidArgument("alphabet size must be >= 2, got " + std::to_string(size));
  }

  int size() const { return size_; }
  bool contains(Symbol s) const { return s < static_cast<Symbol>(size_); }

  friend bool operator==(Alphabet, Alphabet) = default;

 private:
  int size_;
};

// Side alphabets may be trivial (|Y| = 1), unlike observation alphabets.
class SideAlphabet {
 public:
  explicit SideAlphabet(int size) : size_(size) {
    if (size < 1) throw InvalidArgument("side alphabet size must be >= 1, got " + std::to_string(size));
  }
  int size() const { return size_; }
  bool contains(Symbol s) const { return s < static_cast<Symbol>(size_); }
  friend bool operator==(SideAlphabet, SideAlphabet) = default;

 private:
  int size_;
};

void validate_string(Alphabet alphabet, SymbolView x);

// "0110" -> {0,1,1,0}; digits only, each must be a symbol of the alphabet.
SymbolString parse_symbols(const std::string& text, int alphabet_size);
std::string format_symbols(SymbolView x);

inline SymbolString append(SymbolView x, Symbol a) {
  SymbolString out(x.begin(), x.end());
  out.push_back(a);
  return out;
}

// Calls fn(x) for every string of the given length, in lexicographic order.
template <typename Fn>
void for_each_string(int alphabet_size, std::size_t length, Fn&& fn) {
  SymbolString x(length, 0);
  while (true) {
    fn(SymbolView(x));
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++x[i] < static_cast<Symbol>(alphabet_size)) break;
      x[i] = 0;
      if (i == 0) return;
    }
    if (length == 0) return;
  }
}

}  // namespace unilearn
