#include "unilearn/prediction.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "unilearn/parallel.hpp"

namespace unilearn::prediction {

const char* to_string(Functional f) {
  switch (f) {
    case Functional::kSquared:
      return "squared";
    case Functional::kHellinger:
      return "hellinger";
    case Functional::kAbsolute:
      return "absolute";
    case Functional::kRelativeEntropy:
      return "relative_entropy";
  }
  return "?";
}

Functional parse_functional(const std::string& name) {
  if (name == "squared") return Functional::kSquared;
  if (name == "hellinger") return Functional::kHellinger;
  if (name == "absolute") return Functional::kAbsolute;
  if (name == "relative_entropy" || name == "kl") return Functional::kRelativeEntropy;
  throw InvalidArgument("unknown distance functional '" + name + "'");
}

double distance(Functional f, std::span<const double> rho, std::span<const double> mu) {
  if (rho.size() != mu.size()) throw InvalidArgument("distance: distributions of different sizes");
  double d = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    switch (f) {
      case Functional::kSquared:
        d += (rho[a] - mu[a]) * (rho[a] - mu[a]);
        break;
      case Functional::kHellinger: {
        const double s = std::sqrt(rho[a]) - std::sqrt(mu[a]);
        d += s * s;
        break;
      }
      case Functional::kAbsolute:
        d += std::abs(rho[a] - mu[a]);
        break;
      case Functional::kRelativeEntropy:
        if (mu[a] > 0.0) {
          if (rho[a] <= 0.0) return std::numeric_limits<double>::infinity();
          d += mu[a] * std::log(mu[a] / rho[a]);
        }
        break;
    }
  }
  return d;
}

namespace {

struct Frontier {
  SymbolString history;
  double mass;
};

void walk(const Semimeasure& mu, std::size_t n, const NodeValue& value, SymbolString& h, double mass,
          std::vector<double>& per_step, std::size_t stop_depth, std::vector<Frontier>* frontier) {
  if (h.size() >= n) return;
  if (frontier != nullptr && h.size() == stop_depth) {
    frontier->push_back({h, mass});
    return;
  }
  const auto mu_next = mu.conditional(h);
  per_step[h.size()] += mass * value(h, mu_next);
  h.push_back(0);
  for (std::size_t a = 0; a < mu_next.size(); ++a) {
    if (mu_next[a] <= 0.0) continue;
    h.back() = static_cast<Symbol>(a);
    walk(mu, n, value, h, mass * mu_next[a], per_step, stop_depth, frontier);
  }
  h.pop_back();
}

void check_tree_size(int alphabet_size, std::size_t n, double max_leaves) {
  const double leaves = std::pow(static_cast<double>(alphabet_size), static_cast<double>(n));
  if (leaves > max_leaves) {
    throw CapExceeded("history tree has " + std::to_string(alphabet_size) + "^" + std::to_string(n) +
                      " leaves, above the cap of " + format_double(max_leaves));
  }
}

}  // namespace

std::vector<double> tree_expectation(const Semimeasure& mu, std::size_t n, const NodeValue& value,
                                     double max_leaves) {
  const int k = mu.alphabet().size();
  check_tree_size(k, n, max_leaves);
  std::vector<double> per_step(n, 0.0);
  if (n == 0) return per_step;
  const double root_mass = mu.joint(SymbolView{});
  if (root_mass <= 0.0) return per_step;

  // Fixed split depth: the partition (and thus the reduction order) depends
  // only on the alphabet and n, never on the worker count.
  std::size_t split = 0;
  for (double width = 1; width < 64 && split + 1 < n; width *= k) ++split;

  SymbolString h;
  std::vector<Frontier> frontier;
  walk(mu, n, value, h, root_mass, per_step, split, &frontier);
  auto parts = parallel_map<std::vector<double>>(frontier.size(), [&](std::size_t i) {
    std::vector<double> local(n, 0.0);
    SymbolString hist = frontier[i].history;
    walk(mu, n, value, hist, frontier[i].mass, local, 0, nullptr);
    return local;
  });
  for (const auto& p : parts) {
    for (std::size_t t = 0; t < n; ++t) per_step[t] += p[t];
  }
  return per_step;
}

std::vector<double> per_step_expected_distance(const Semimeasure& rho, const Semimeasure& mu, std::size_t n,
                                               Functional f, double max_leaves) {
  if (rho.alphabet() != mu.alphabet()) throw InvalidArgument("rho and mu must share an alphabet");
  return tree_expectation(
      mu, n, [&](SymbolView h, std::span<const double> mu_next) { return distance(f, rho.conditional(h), mu_next); },
      max_leaves);
}

double exact_cumulative_distance(const Semimeasure& rho, const Semimeasure& mu, std::size_t n, Functional f,
                                 double max_leaves) {
  double total = 0.0;
  for (double v : per_step_expected_distance(rho, mu, n, f, max_leaves)) total += v;
  return total;
}

std::size_t deviation_count(const Semimeasure& rho, const Semimeasure& mu, SymbolView stream, Functional f,
                            double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("deviation_count: eps must be positive");
  std::size_t count = 0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const auto past = stream.first(t);
    if (distance(f, rho.conditional(past), mu.conditional(past)) > eps) ++count;
  }
  return count;
}

double expected_deviation_count(const Semimeasure& rho, const Semimeasure& mu, std::size_t n, Functional f,
                                double eps, double max_leaves) {
  if (!(eps > 0.0)) throw InvalidArgument("expected_deviation_count: eps must be positive");
  const auto per_step = tree_expectation(
      mu, n,
      [&](SymbolView h, std::span<const double> mu_next) {
        return distance(f, rho.conditional(h), mu_next) > eps ? 1.0 : 0.0;
      },
      max_leaves);
  double total = 0.0;
  for (double v : per_step) total += v;
  return total;
}

double multi_step_predictive(const Semimeasure& rho, SymbolView past, SymbolView block) {
  const double base = rho.log_joint(past);
  if (base == kNegInf) throw ConditioningOnNull("multi_step_predictive: past has probability zero");
  SymbolString full(past.begin(), past.end());
  full.insert(full.end(), block.begin(), block.end());
  const double l = rho.log_joint(full);
  return l == kNegInf ? 0.0 : std::exp(l - base);
}

double cumulative_log_error(const Semimeasure& rho, SymbolView stream) {
  double total = 0.0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const auto past = stream.first(t);
    if (rho.log_joint(past) == kNegInf) return std::numeric_limits<double>::infinity();
    const double p = rho.conditional(past)[stream[t]];
    if (p <= 0.0) return std::numeric_limits<double>::infinity();
    total -= std::log(p);
  }
  return total;
}

double cumulative_absolute_error(const Semimeasure& rho, SymbolView stream) {
  double total = 0.0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const auto past = stream.first(t);
    const double p = rho.log_joint(past) == kNegInf ? 0.0 : rho.conditional(past)[stream[t]];
    total += std::abs(1.0 - p);
  }
  return total;
}

BoundReport bound_report(const std::string& class_id, const std::string& mu_id, const Semimeasure& mixture,
                         const Semimeasure& mu, double mu_weight, std::size_t n, Functional f) {
  BoundReport r;
  r.class_id = class_id;
  r.mu_id = mu_id;
  r.horizon = n;
  r.functional = f;
  r.value = exact_cumulative_distance(mixture, mu, n, f);
  r.bound = std::log(1.0 / mu_weight);
  r.margin = r.bound - r.value;
  return r;
}

void write_bound_csv_header(std::ostream& out) { out << "class_id,mu_id,n,functional,value,bound,margin\n"; }

void write_bound_csv_row(std::ostream& out, const BoundReport& r) {
  out << r.class_id << ',' << r.mu_id << ',' << r.horizon << ',' << to_string(r.functional) << ','
      << format_double(r.value) << ',' << format_double(r.bound) << ',' << format_double(r.margin) << '\n';
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace unilearn::prediction
