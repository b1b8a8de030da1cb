#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "unilearn/core.hpp"

namespace unilearn {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln(exp(a) + exp(b)) without overflow; kNegInf is the additive identity.
double log_add(double a, double b);
double log_sum(std::span<const double> terms);

/// A function nu on finite strings with nu(empty) <= 1 and
/// nu(x) >= sum_a nu(xa). Joints are reported in natural-log space so that
/// long strings do not underflow; kNegInf encodes probability zero.
///
/// Implementations are immutable after construction and may be evaluated
/// from several threads at once.
class Semimeasure {
 public:
  virtual ~Semimeasure() = default;

  virtual Alphabet alphabet() const = 0;
  virtual double log_joint(SymbolView x) const = 0;

  /// True when the model is known to satisfy the measure equalities.
  virtual bool is_measure() const { return false; }

  /// rho(a|x) for every symbol a. Throws ConditioningOnNull when rho(x) = 0.
  virtual std::vector<double> conditional(SymbolView x) const;

  double joint(SymbolView x) const { return std::exp(log_joint(x)); }
};

/// rho(a|x) := rho(xa) / rho(x).
double predictive(const Semimeasure& rho, SymbolView x, Symbol a);

struct SemimeasureReport {
  bool passed = true;
  // Largest value of sum_a nu(xa) - nu(x) (or nu(empty) - 1) seen; 0 if none positive.
  double worst_violation = 0.0;
  SymbolString worst_at;
  std::size_t strings_checked = 0;
};

/// Exhaustively checks the semimeasure axioms on every string shorter than
/// `depth`. Passes iff nu(x) >= sum_a nu(xa) - tol everywhere and
/// nu(empty) <= 1 + tol.
SemimeasureReport check_semimeasure(const Semimeasure& nu, int depth, double tol = 1e-12);

}  // namespace unilearn
