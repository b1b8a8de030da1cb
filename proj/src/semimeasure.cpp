#include "unilearn/semimeasure.hpp"

#include <algorithm>

namespace unilearn {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum(std::span<const double> terms) {
  double hi = kNegInf;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

std::vector<double> Semimeasure::conditional(SymbolView x) const {
  const double base = log_joint(x);
  if (base == kNegInf) {
    throw ConditioningOnNull("conditioning on a string of probability zero: '" + format_symbols(x) + "'");
  }
  const int k = alphabet().size();
  std::vector<double> out(static_cast<std::size_t>(k));
  SymbolString xa(x.begin(), x.end());
  xa.push_back(0);
  for (int a = 0; a < k; ++a) {
    xa.back() = static_cast<Symbol>(a);
    const double l = log_joint(xa);
    out[static_cast<std::size_t>(a)] = l == kNegInf ? 0.0 : std::exp(l - base);
  }
  return out;
}

double predictive(const Semimeasure& rho, SymbolView x, Symbol a) {
  if (!rho.alphabet().contains(a)) throw InvalidArgument("predictive: symbol outside alphabet");
  return rho.conditional(x)[a];
}

namespace {

void check_node(const Semimeasure& nu, SymbolString& x, int depth, double tol, SemimeasureReport& report) {
  ++report.strings_checked;
  const double here = nu.joint(x);
  double children = 0.0;
  const int k = nu.alphabet().size();
  x.push_back(0);
  for (int a = 0; a < k; ++a) {
    x.back() = static_cast<Symbol>(a);
    children += nu.joint(x);
  }
  x.pop_back();
  const double violation = children - here;
  if (violation > report.worst_violation) {
    report.worst_violation = violation;
    report.worst_at = x;
  }
  if (violation > tol) report.passed = false;
  if (static_cast<int>(x.size()) + 1 >= depth) return;
  x.push_back(0);
  for (int a = 0; a < k; ++a) {
    x.back() = static_cast<Symbol>(a);
    check_node(nu, x, depth, tol, report);
  }
  x.pop_back();
}

}  // namespace

SemimeasureReport check_semimeasure(const Semimeasure& nu, int depth, double tol) {
  if (depth < 1) throw InvalidArgument("check_semimeasure: depth must be >= 1");
  if (tol < 0) throw InvalidArgument("check_semimeasure: tol must be >= 0");
  SemimeasureReport report;
  const double root = nu.joint(SymbolView{});
  if (root - 1.0 > report.worst_violation) {
    report.worst_violation = root - 1.0;
    report.worst_at.clear();
  }
  if (root > 1.0 + tol) report.passed = false;
  SymbolString x;
  check_node(nu, x, depth, tol, report);
  return report;
}

}  // namespace unilearn
