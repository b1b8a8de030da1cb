#include "unilearn/sequences.hpp"

namespace unilearn {

bool SymbolSequence::has_prefix(SymbolView x) const {
  for (std::size_t t = 0; t < x.size(); ++t) {
    const auto s = at(t);
    if (!s || *s != x[t]) return false;
  }
  return true;
}

namespace {

class StepSequence final : public SymbolSequence {
 public:
  StepSequence(std::size_t count, Alphabet alphabet) : count_(count), alphabet_(alphabet) {}
  Alphabet alphabet() const override { return alphabet_; }
  std::optional<Symbol> at(std::size_t t) const override { return t < count_ ? 1u : 0u; }
  std::string describe() const override { return "step(" + std::to_string(count_) + ")"; }

 private:
  std::size_t count_;
  Alphabet alphabet_;
};

class BinaryExpansionSequence final : public SymbolSequence {
 public:
  BinaryExpansionSequence(std::uint64_t numerator, int bits) : numerator_(numerator), bits_(bits) {
    if (bits < 0 || bits > 63) throw InvalidArgument("binary expansion: bits must be in [0, 63]");
    if (numerator >> bits != 0) throw InvalidArgument("binary expansion: numerator must be < 2^bits");
  }
  Alphabet alphabet() const override { return Alphabet(2); }
  std::optional<Symbol> at(std::size_t t) const override {
    if (t >= static_cast<std::size_t>(bits_)) return 0u;
    return static_cast<Symbol>((numerator_ >> (bits_ - 1 - static_cast<int>(t))) & 1u);
  }
  std::string describe() const override {
    return "binexp(" + std::to_string(numerator_) + "/" + std::to_string(std::uint64_t{1} << bits_) + ")";
  }

 private:
  std::uint64_t numerator_;
  int bits_;
};

class RadixSequence final : public SymbolSequence {
 public:
  RadixSequence(std::uint64_t value, Alphabet alphabet) : value_(value), alphabet_(alphabet) {}
  Alphabet alphabet() const override { return alphabet_; }
  std::optional<Symbol> at(std::size_t t) const override {
    std::uint64_t v = value_;
    const auto base = static_cast<std::uint64_t>(alphabet_.size());
    for (std::size_t i = 0; i < t && v != 0; ++i) v /= base;
    return static_cast<Symbol>(v % base);
  }
  std::string describe() const override { return "radix(" + std::to_string(value_) + ")"; }

 private:
  std::uint64_t value_;
  Alphabet alphabet_;
};

class PeriodicSequence final : public SymbolSequence {
 public:
  PeriodicSequence(SymbolString pattern, Alphabet alphabet) : pattern_(std::move(pattern)), alphabet_(alphabet) {
    if (pattern_.empty()) throw InvalidArgument("periodic sequence needs a non-empty pattern");
    validate_string(alphabet_, pattern_);
  }
  Alphabet alphabet() const override { return alphabet_; }
  std::optional<Symbol> at(std::size_t t) const override { return pattern_[t % pattern_.size()]; }
  std::string describe() const override { return "periodic(" + format_symbols(pattern_) + ")"; }

 private:
  SymbolString pattern_;
  Alphabet alphabet_;
};

class FiniteSequence final : public SymbolSequence {
 public:
  FiniteSequence(SymbolString symbols, Alphabet alphabet) : symbols_(std::move(symbols)), alphabet_(alphabet) {
    validate_string(alphabet_, symbols_);
  }
  Alphabet alphabet() const override { return alphabet_; }
  std::optional<Symbol> at(std::size_t t) const override {
    if (t < symbols_.size()) return symbols_[t];
    return std::nullopt;
  }
  std::optional<std::size_t> length() const override { return symbols_.size(); }
  std::string describe() const override { return "finite(" + format_symbols(symbols_) + ")"; }

 private:
  SymbolString symbols_;
  Alphabet alphabet_;
};

class FunctionSequence final : public SymbolSequence {
 public:
  FunctionSequence(std::function<Symbol(std::size_t)> fn, Alphabet alphabet, std::string description)
      : fn_(std::move(fn)), alphabet_(alphabet), description_(std::move(description)) {}
  Alphabet alphabet() const override { return alphabet_; }
  std::optional<Symbol> at(std::size_t t) const override { return fn_(t); }
  std::string describe() const override { return description_; }

 private:
  std::function<Symbol(std::size_t)> fn_;
  Alphabet alphabet_;
  std::string description_;
};

}  // namespace

SequencePtr step_sequence(std::size_t count, Alphabet alphabet) {
  return std::make_shared<StepSequence>(count, alphabet);
}

SequencePtr binary_expansion_sequence(std::uint64_t numerator, int bits) {
  return std::make_shared<BinaryExpansionSequence>(numerator, bits);
}

SequencePtr radix_sequence(std::uint64_t value, Alphabet alphabet) {
  return std::make_shared<RadixSequence>(value, alphabet);
}

SequencePtr periodic_sequence(SymbolString pattern, Alphabet alphabet) {
  return std::make_shared<PeriodicSequence>(std::move(pattern), alphabet);
}

SequencePtr finite_sequence(SymbolString symbols, Alphabet alphabet) {
  return std::make_shared<FiniteSequence>(std::move(symbols), alphabet);
}

SequencePtr function_sequence(std::function<Symbol(std::size_t)> fn, Alphabet alphabet, std::string description) {
  return std::make_shared<FunctionSequence>(std::move(fn), alphabet, std::move(description));
}

}  // namespace unilearn
