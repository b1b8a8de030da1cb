#include "unilearn/decision.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "unilearn/parallel.hpp"

namespace unilearn::decision {

namespace {

double parse_entry(const std::string& tok) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InvalidArgument("loss grid: '" + tok + "' is not a number");
  }
  return v;
}

// A non-owning handle for a mixture that outlives the call.
SemimeasurePtr borrow(const Semimeasure& s) {
  return SemimeasurePtr(&s, [](const Semimeasure*) {});
}

}  // namespace

LossMatrix::LossMatrix(std::vector<std::vector<double>> rows, std::vector<std::string> decision_labels)
    : rows_(std::move(rows)), labels_(std::move(decision_labels)) {
  if (rows_.size() < 2) throw InvalidArgument("loss matrix needs a row for each of at least two observed symbols");
  const std::size_t width = rows_.front().size();
  if (width == 0) throw InvalidArgument("loss matrix needs at least one decision");
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    if (rows_[x].size() != width) {
      throw InvalidArgument("loss matrix row " + std::to_string(x) + " has " + std::to_string(rows_[x].size()) +
                            " entries, expected " + std::to_string(width));
    }
    for (double v : rows_[x]) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("loss matrix entry " + prediction::format_double(v) + " in row " + std::to_string(x) +
                              " lies outside [0,1]");
      }
    }
  }
  if (!labels_.empty() && labels_.size() != width) {
    throw InvalidArgument("loss matrix: " + std::to_string(labels_.size()) + " decision labels for " +
                          std::to_string(width) + " columns");
  }
}

LossMatrix LossMatrix::parse_grid(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line) {
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == "decisions:") {
      while (ls >> tok) labels.push_back(tok);
      continue;
    }
    std::vector<double> row{parse_entry(tok)};
    while (ls >> tok) row.push_back(parse_entry(tok));
    rows.push_back(std::move(row));
  }
  return LossMatrix(std::move(rows), std::move(labels));
}

std::string LossMatrix::to_grid() const {
  std::string out;
  if (!labels_.empty()) {
    out += "decisions:";
    for (const auto& l : labels_) out += " " + l;
    out += "\n";
  }
  for (const auto& row : rows_) {
    for (std::size_t y = 0; y < row.size(); ++y) {
      if (y > 0) out += ' ';
      out += prediction::format_double(row[y]);
    }
    out += '\n';
  }
  return out;
}

LossMatrix LossMatrix::zero_one(int size) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(size), std::vector<double>(size, 1.0));
  for (int i = 0; i < size; ++i) rows[i][i] = 0.0;
  return LossMatrix(std::move(rows));
}

LossMatrix LossMatrix::random(Rng& rng, int observations, int decisions) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(observations));
  for (auto& row : rows) {
    for (int y = 0; y < decisions; ++y) row.push_back(static_cast<double>(rng.below(1025)) / 1024.0);
  }
  return LossMatrix(std::move(rows));
}

std::size_t bayes_decision(std::span<const double> p, const LossMatrix& loss) {
  if (p.size() != static_cast<std::size_t>(loss.observations())) {
    throw InvalidArgument("bayes_decision: distribution and loss matrix disagree on |X|");
  }
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t y = 0; y < static_cast<std::size_t>(loss.decisions()); ++y) {
    double v = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) v += p[x] * loss.at(static_cast<Symbol>(x), y);
    if (y == 0 || v < best_value) {
      best = y;
      best_value = v;
    }
  }
  return best;
}

LambdaRho::LambdaRho(SemimeasurePtr rho, LossMatrix loss, std::string label)
    : rho_(std::move(rho)), loss_(std::move(loss)), label_(std::move(label)) {
  if (!rho_) throw InvalidArgument("LambdaRho: null model");
  if (rho_->alphabet().size() != loss_.observations()) {
    throw InvalidArgument("LambdaRho: model alphabet and loss matrix rows disagree");
  }
}

std::size_t LambdaRho::decide(SymbolView history) const { return bayes_decision(rho_->conditional(history), loss_); }

std::vector<double> LambdaRho::expected_losses(SymbolView history) const {
  const auto p = rho_->conditional(history);
  std::vector<double> out(static_cast<std::size_t>(loss_.decisions()), 0.0);
  for (std::size_t y = 0; y < out.size(); ++y) {
    for (std::size_t x = 0; x < p.size(); ++x) out[y] += p[x] * loss_.at(static_cast<Symbol>(x), y);
  }
  return out;
}

TableStrategy::TableStrategy(int alphabet_size, std::vector<std::size_t> table, std::string label)
    : alphabet_size_(alphabet_size), table_(std::move(table)), label_(std::move(label)) {
  if (alphabet_size < 2) throw InvalidArgument("TableStrategy: alphabet size must be >= 2");
}

std::size_t TableStrategy::history_index(int alphabet_size, SymbolView history) {
  std::size_t offset = 0;
  std::size_t level = 1;
  for (std::size_t i = 0; i < history.size(); ++i) {
    offset += level;
    level *= static_cast<std::size_t>(alphabet_size);
  }
  std::size_t rank = 0;
  for (Symbol s : history) rank = rank * static_cast<std::size_t>(alphabet_size) + s;
  return offset + rank;
}

std::size_t TableStrategy::decide(SymbolView history) const {
  const auto i = history_index(alphabet_size_, history);
  if (i >= table_.size()) throw InvalidArgument("TableStrategy: history beyond the table's horizon");
  return table_[i];
}

double exact_cumulative_loss(const Strategy& strategy, const Semimeasure& mu, const LossMatrix& loss, std::size_t n,
                             double max_leaves) {
  if (mu.alphabet().size() != loss.observations()) {
    throw InvalidArgument("exact_cumulative_loss: model alphabet and loss matrix rows disagree");
  }
  const auto per_step = prediction::tree_expectation(
      mu, n,
      [&](SymbolView h, std::span<const double> mu_next) {
        const std::size_t y = strategy.decide(h);
        if (y >= static_cast<std::size_t>(loss.decisions())) {
          throw InvalidArgument(strategy.name() + " chose decision " + std::to_string(y) + " outside the loss matrix");
        }
        double v = 0.0;
        for (std::size_t x = 0; x < mu_next.size(); ++x) v += mu_next[x] * loss.at(static_cast<Symbol>(x), y);
        return v;
      },
      max_leaves);
  double total = 0.0;
  for (double v : per_step) total += v;
  return total;
}

RegretReport regret_bound_check(const bayes::BayesMixture& cls, std::size_t mu_index, const LossMatrix& loss,
                                std::size_t n) {
  const auto& mu = cls.member(mu_index);
  const LambdaRho lambda_xi(borrow(cls), loss, "lambda_xi");
  const LambdaRho lambda_mu(cls.member_ptr(mu_index), loss, "lambda_mu");
  RegretReport r;
  r.loss_xi = exact_cumulative_loss(lambda_xi, mu, loss, n);
  r.loss_mu = exact_cumulative_loss(lambda_mu, mu, loss, n);
  r.regret = std::sqrt(r.loss_xi) - std::sqrt(r.loss_mu);
  r.bound = std::sqrt(2.0 * std::log(1.0 / cls.weight(mu_index)));
  r.margin = r.bound - r.regret;
  const double root = std::sqrt(r.loss_mu) + r.bound;
  r.ratio_ceiling = root * root;
  return r;
}

ParetoReport pareto_check(const bayes::BayesMixture& cls, const LossMatrix& loss, std::size_t n,
                          const std::vector<StrategyPtr>& challengers, double tol) {
  ParetoReport report;
  const LambdaRho lambda_xi(borrow(cls), loss, "lambda_xi");
  for (std::size_t i = 0; i < cls.size(); ++i) {
    report.lambda_xi_losses.push_back(exact_cumulative_loss(lambda_xi, cls.member(i), loss, n));
  }
  for (const auto& s : challengers) {
    ParetoEntry e;
    e.challenger = s->name();
    for (std::size_t i = 0; i < cls.size(); ++i) {
      const double v = exact_cumulative_loss(*s, cls.member(i), loss, n);
      e.losses.push_back(v);
      const double base = report.lambda_xi_losses[i];
      const double slack = tol * std::max(1.0, std::abs(base));
      if (v < base - slack) e.better_somewhere = true;
      if (v > base + slack) e.worse_somewhere = true;
    }
    e.violation = e.better_somewhere && !e.worse_somewhere;
    report.violation_found = report.violation_found || e.violation;
    report.entries.push_back(std::move(e));
  }
  return report;
}

double strategy_count(int alphabet_size, int decisions, std::size_t n) {
  double histories = 0.0;
  double level = 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    histories += level;
    level *= alphabet_size;
  }
  return std::pow(static_cast<double>(decisions), histories);
}

namespace {

// c[h][y]: mu(h) * sum_x mu(x|h) loss(x, y) for every history h of length < n,
// in TableStrategy order.
void history_costs(const Semimeasure& mu, const LossMatrix& loss, std::size_t n, SymbolString& h, double mass,
                   std::vector<std::vector<double>>& costs) {
  if (h.size() >= n) return;
  const int k = mu.alphabet().size();
  auto& row = costs[TableStrategy::history_index(k, h)];
  if (mass <= 0.0) return;
  const auto next = mu.conditional(h);
  for (std::size_t y = 0; y < row.size(); ++y) {
    double v = 0.0;
    for (std::size_t x = 0; x < next.size(); ++x) v += next[x] * loss.at(static_cast<Symbol>(x), y);
    row[y] = mass * v;
  }
  h.push_back(0);
  for (int a = 0; a < k; ++a) {
    h.back() = static_cast<Symbol>(a);
    history_costs(mu, loss, n, h, mass * next[a], costs);
  }
  h.pop_back();
}

// Partial loss of every assignment of decisions to costs[first, last),
// assignment index = mixed-radix number with costs[first] least significant.
std::vector<double> partial_sums(const std::vector<std::vector<double>>& costs, std::size_t first, std::size_t last,
                                 std::size_t decisions) {
  std::size_t total = 1;
  for (std::size_t i = first; i < last; ++i) total *= decisions;
  std::vector<double> out(total);
  std::vector<std::size_t> digits(last - first, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    double s = 0.0;
    for (std::size_t j = 0; j < digits.size(); ++j) s += costs[first + j][digits[j]];
    out[idx] = s;
    for (std::size_t j = 0; j < digits.size(); ++j) {
      if (++digits[j] < decisions) break;
      digits[j] = 0;
    }
  }
  return out;
}

struct ChunkResult {
  double min = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  std::uint64_t below = 0;
  bool any = false;
};

}  // namespace

StrategySearchResult exhaustive_strategy_search(const Semimeasure& mu, const LossMatrix& loss, std::size_t n,
                                                double threshold, double tol, double max_strategies) {
  const int k = mu.alphabet().size();
  if (k != loss.observations()) throw InvalidArgument("strategy search: alphabet and loss matrix disagree");
  if (n == 0) throw InvalidArgument("strategy search: horizon must be >= 1");
  const std::size_t decisions = static_cast<std::size_t>(loss.decisions());
  const double count = strategy_count(k, loss.decisions(), n);
  if (count > max_strategies) {
    throw CapExceeded("exhaustive strategy search over " + prediction::format_double(count) +
                      " strategies exceeds the cap of " + prediction::format_double(max_strategies));
  }
  std::size_t histories = 0;
  for (std::size_t t = 0, level = 1; t < n; ++t, level *= static_cast<std::size_t>(k)) histories += level;

  std::vector<std::vector<double>> costs(histories, std::vector<double>(decisions, 0.0));
  SymbolString h;
  history_costs(mu, loss, n, h, mu.joint(SymbolView{}), costs);

  const std::size_t split = histories / 2;
  const auto sums_a = partial_sums(costs, 0, split, decisions);
  const auto sums_b = partial_sums(costs, split, histories, decisions);
  const double cutoff = threshold - tol;

  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (sums_a.size() + kChunk - 1) / kChunk;
  const auto parts = parallel_map<ChunkResult>(chunks, [&](std::size_t c) {
    ChunkResult r;
    const std::size_t end = std::min(sums_a.size(), (c + 1) * kChunk);
    for (std::size_t ia = c * kChunk; ia < end; ++ia) {
      const double a = sums_a[ia];
      for (std::size_t ib = 0; ib < sums_b.size(); ++ib) {
        const double total = a + sums_b[ib];
        if (total < cutoff) ++r.below;
        if (!r.any || total < r.min) {
          r.any = true;
          r.min = total;
          r.ia = ia;
          r.ib = ib;
        }
      }
    }
    return r;
  });

  StrategySearchResult result;
  result.strategies = static_cast<std::uint64_t>(sums_a.size()) * sums_b.size();
  bool any = false;
  std::size_t ia = 0;
  std::size_t ib = 0;
  for (const auto& p : parts) {
    result.below += p.below;
    if (p.any && (!any || p.min < result.min_loss)) {
      any = true;
      result.min_loss = p.min;
      ia = p.ia;
      ib = p.ib;
    }
  }
  result.argmin.assign(histories, 0);
  for (std::size_t j = 0; j < split; ++j, ia /= decisions) result.argmin[j] = ia % decisions;
  for (std::size_t j = split; j < histories; ++j, ib /= decisions) result.argmin[j] = ib % decisions;
  return result;
}

}  // namespace unilearn::decision
