#include "unilearn/description.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

namespace unilearn::desc {

namespace {

constexpr std::uint64_t kMaxInteger = std::uint64_t{1} << 62;

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::uint64_t parse_uint(const std::string& text, const char* what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw InvalidArgument(std::string(what) + ": expected a non-negative integer, got '" + text + "'");
  }
  if (v >= kMaxInteger) throw InvalidArgument(std::string(what) + ": integer too large");
  return v;
}

Rational reduced(std::uint64_t num, std::uint64_t den) {
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

bool sums_to_one(const std::vector<Rational>& row) {
  // Exact rational sum; denominators are bounded by 2^62 so the running
  // value is reduced after every step and kept in 128 bits.
  unsigned __int128 num = 0;
  unsigned __int128 den = 1;
  for (const auto& r : row) {
    num = num * r.den + static_cast<unsigned __int128>(r.num) * den;
    den = den * r.den;
    unsigned __int128 a = num;
    unsigned __int128 b = den;
    while (b != 0) {
      const auto t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    if (den > (static_cast<unsigned __int128>(1) << 64)) throw InvalidArgument("probability row: denominators too large");
  }
  return num == den;
}

void check_row(const std::vector<Rational>& row, std::size_t width, const char* family) {
  if (row.size() != width) {
    throw InvalidArgument(std::string(family) + ": every row needs " + std::to_string(width) + " entries");
  }
  for (const auto& p : row) {
    if (p.num > p.den) throw InvalidArgument(std::string(family) + ": probability " + p.str() + " exceeds 1");
  }
  if (!sums_to_one(row)) throw InvalidArgument(std::string(family) + ": a row does not sum to exactly 1");
}

std::uint64_t ipow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > kMaxInteger / base) throw InvalidArgument("markov: too many contexts");
    r *= base;
  }
  return r;
}

// Checks everything the constructors would, plus the exact-sum rule.
void validate(ModelDescription& d) {
  const char* name = family_name(d.family);
  switch (d.family) {
    case Family::kBernoulli:
      if (d.rows.size() != 1 || d.rows[0].size() != 1) throw InvalidArgument("bernoulli: one probability");
      if (d.rows[0][0].num > d.rows[0][0].den) throw InvalidArgument("bernoulli: probability exceeds 1");
      d.alphabet = 2;
      return;
    case Family::kCategorical:
      if (d.rows.size() != 1 || d.rows[0].size() < 2) throw InvalidArgument("categorical: at least two probabilities");
      d.alphabet = static_cast<int>(d.rows[0].size());
      check_row(d.rows[0], d.rows[0].size(), name);
      return;
    case Family::kMarkov: {
      if (d.rows.empty() || d.rows[0].size() < 2) throw InvalidArgument("markov: needs rows of at least two entries");
      d.alphabet = static_cast<int>(d.rows[0].size());
      if (d.a > 8) throw InvalidArgument("markov: order above 8 is not supported");
      const auto contexts = ipow(static_cast<std::uint64_t>(d.alphabet), d.a);
      if (d.rows.size() != contexts) {
        throw InvalidArgument("markov: order " + std::to_string(d.a) + " over " + std::to_string(d.alphabet) +
                              " symbols needs " + std::to_string(contexts) + " rows, got " +
                              std::to_string(d.rows.size()));
      }
      for (const auto& row : d.rows) check_row(row, static_cast<std::size_t>(d.alphabet), name);
      return;
    }
    case Family::kKT:
      if (d.alphabet < 2) throw InvalidArgument("kt: alphabet size must be >= 2");
      return;
    case Family::kStep:
      d.alphabet = 2;
      return;
    case Family::kPeriodic:
      if (d.alphabet < 2 || d.alphabet > 10) throw InvalidArgument("periodic: alphabet size must be in 2..10");
      if (d.pattern.empty()) throw InvalidArgument("periodic: empty pattern");
      validate_string(Alphabet(d.alphabet), d.pattern);
      return;
    case Family::kBinaryExpansion:
      d.alphabet = 2;
      if (d.b < 1 || d.b > 62) throw InvalidArgument("binexp: bits must be in 1..62");
      if (d.a >= (std::uint64_t{1} << d.b)) throw InvalidArgument("binexp: numerator must be below 2^bits");
      return;
    case Family::kRadix:
      if (d.alphabet < 2) throw InvalidArgument("radix: alphabet size must be >= 2");
      return;
    case Family::kConditionalIID:
      if (d.rows.empty() || d.rows[0].size() < 2) throw InvalidArgument("cond_iid: needs rows of at least two entries");
      d.alphabet = static_cast<int>(d.rows[0].size());
      d.side = static_cast<int>(d.rows.size());
      for (const auto& row : d.rows) check_row(row, static_cast<std::size_t>(d.alphabet), name);
      return;
    case Family::kConditionalMarkov:
      if (d.side < 1) throw InvalidArgument("cond_markov: side alphabet size must be >= 1");
      if (d.rows.empty() || d.rows[0].size() < 2) throw InvalidArgument("cond_markov: needs rows of at least two entries");
      d.alphabet = static_cast<int>(d.rows[0].size());
      if (d.rows.size() != static_cast<std::size_t>(d.alphabet) * static_cast<std::size_t>(d.side)) {
        throw InvalidArgument("cond_markov: needs |X|*|Y| = " + std::to_string(d.alphabet * d.side) + " rows, got " +
                              std::to_string(d.rows.size()));
      }
      for (const auto& row : d.rows) check_row(row, static_cast<std::size_t>(d.alphabet), name);
      return;
  }
  throw InvalidArgument("unknown model family");
}

std::vector<Rational> parse_row(const std::string& group) {
  std::vector<Rational> row;
  for (const auto& item : split(group, ',')) row.push_back(parse_rational(item));
  return row;
}

int parse_small(const std::string& text, const char* what) {
  const auto v = parse_uint(text, what);
  if (v > 1'000'000) throw InvalidArgument(std::string(what) + ": value too large");
  return static_cast<int>(v);
}

void put_uint(std::uint64_t n, Bits& out) {
  if (n >= kMaxInteger) throw InvalidArgument("serialize: integer too large");
  elias_delta_encode(n + 1, out);
}

std::uint64_t get_uint(const Bits& bits, std::size_t& pos) { return elias_delta_decode(bits, pos) - 1; }

void put_rational(const Rational& r, Bits& out) {
  put_uint(r.num, out);
  elias_delta_encode(r.den, out);
}

Rational get_rational(const Bits& bits, std::size_t& pos) {
  const auto num = get_uint(bits, pos);
  const auto den = elias_delta_decode(bits, pos);
  return Rational{num, den};
}

void put_rows(const ModelDescription& d, Bits& out) {
  for (const auto& row : d.rows) {
    for (const auto& p : row) put_rational(p, out);
  }
}

std::vector<std::vector<Rational>> get_rows(const Bits& bits, std::size_t& pos, std::uint64_t count,
                                            std::uint64_t width) {
  if (count * width > bits.size()) throw InvalidArgument("deserialize: row block longer than the input");
  std::vector<std::vector<Rational>> rows(count);
  for (auto& row : rows) {
    for (std::uint64_t i = 0; i < width; ++i) row.push_back(get_rational(bits, pos));
  }
  return rows;
}

std::string join_rows(const std::vector<std::vector<Rational>>& rows) {
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0) out += ';';
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i > 0) out += ',';
      out += rows[r][i].str();
    }
  }
  return out;
}

std::vector<std::vector<double>> to_doubles(const std::vector<std::vector<Rational>>& rows) {
  std::vector<std::vector<double>> out;
  for (const auto& row : rows) {
    std::vector<double> r;
    for (const auto& p : row) r.push_back(p.value());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

Rational parse_rational_unchecked(const std::string& text) {
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = parse_uint(trim(text.substr(0, slash)), "probability numerator");
    const auto den = parse_uint(trim(text.substr(slash + 1)), "probability denominator");
    if (den == 0) throw InvalidArgument("probability '" + text + "' has denominator 0");
    return reduced(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 17) throw InvalidArgument("probability '" + text + "': 1 to 17 decimals");
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const auto w = whole.empty() ? 0 : parse_uint(whole, "probability");
    const auto f = parse_uint(frac, "probability");
    if (w > 1) throw InvalidArgument("probability '" + text + "' exceeds 1");
    return reduced(w * den + f, den);
  }
  return Rational{parse_uint(text, "probability"), 1};
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw InvalidArgument("empty probability");
  const auto r = parse_rational_unchecked(text);
  if (r.num > r.den) throw InvalidArgument("probability '" + text + "' exceeds 1");
  return r;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::kBernoulli:
      return "bernoulli";
    case Family::kCategorical:
      return "categorical";
    case Family::kMarkov:
      return "markov";
    case Family::kKT:
      return "kt";
    case Family::kStep:
      return "step";
    case Family::kPeriodic:
      return "periodic";
    case Family::kBinaryExpansion:
      return "binexp";
    case Family::kRadix:
      return "radix";
    case Family::kConditionalIID:
      return "cond_iid";
    case Family::kConditionalMarkov:
      return "cond_markov";
  }
  return "?";
}

ModelDescription parse_description(const std::string& raw) {
  const std::string text = trim(raw);
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw InvalidArgument("model description '" + text + "': expected name(arguments)");
  }
  const std::string name = trim(text.substr(0, open));
  const auto groups = split(text.substr(open + 1, text.size() - open - 2), ';');
  auto need_groups = [&](std::size_t n) {
    if (groups.size() != n) {
      throw InvalidArgument(name + ": expected " + std::to_string(n) + " ';'-separated argument(s), got " +
                            std::to_string(groups.size()));
    }
  };

  ModelDescription d;
  if (name == "bernoulli") {
    need_groups(1);
    d.family = Family::kBernoulli;
    d.rows = {{parse_rational(groups[0])}};
  } else if (name == "categorical") {
    need_groups(1);
    d.family = Family::kCategorical;
    d.rows = {parse_row(groups[0])};
  } else if (name == "markov") {
    if (groups.size() < 2) throw InvalidArgument("markov: expected markov(order; row; ...)");
    d.family = Family::kMarkov;
    d.a = parse_uint(groups[0], "markov order");
    for (std::size_t i = 1; i < groups.size(); ++i) d.rows.push_back(parse_row(groups[i]));
  } else if (name == "kt") {
    need_groups(1);
    d.family = Family::kKT;
    d.alphabet = parse_small(groups[0], "kt alphabet");
  } else if (name == "step") {
    need_groups(1);
    d.family = Family::kStep;
    d.a = parse_uint(groups[0], "step count");
  } else if (name == "periodic") {
    need_groups(2);
    d.family = Family::kPeriodic;
    d.alphabet = parse_small(groups[0], "periodic alphabet");
    if (d.alphabet > 10) throw InvalidArgument("periodic: alphabet size must be in 2..10");
    d.pattern = parse_symbols(groups[1], d.alphabet);
  } else if (name == "binexp") {
    need_groups(2);
    d.family = Family::kBinaryExpansion;
    d.a = parse_uint(groups[0], "binexp numerator");
    d.b = parse_uint(groups[1], "binexp bits");
  } else if (name == "radix") {
    need_groups(2);
    d.family = Family::kRadix;
    d.a = parse_uint(groups[0], "radix value");
    d.alphabet = parse_small(groups[1], "radix alphabet");
  } else if (name == "cond_iid") {
    d.family = Family::kConditionalIID;
    for (const auto& g : groups) d.rows.push_back(parse_row(g));
  } else if (name == "cond_markov") {
    if (groups.size() < 2) throw InvalidArgument("cond_markov: expected cond_markov(side; row; ...)");
    d.family = Family::kConditionalMarkov;
    d.side = parse_small(groups[0], "cond_markov side alphabet");
    for (std::size_t i = 1; i < groups.size(); ++i) d.rows.push_back(parse_row(groups[i]));
  } else {
    throw InvalidArgument("unknown model family '" + name + "'");
  }
  validate(d);
  return d;
}

std::string to_text(const ModelDescription& d) {
  const std::string name = family_name(d.family);
  switch (d.family) {
    case Family::kBernoulli:
    case Family::kCategorical:
    case Family::kConditionalIID:
      return name + "(" + join_rows(d.rows) + ")";
    case Family::kMarkov:
      return name + "(" + std::to_string(d.a) + ";" + join_rows(d.rows) + ")";
    case Family::kKT:
      return name + "(" + std::to_string(d.alphabet) + ")";
    case Family::kStep:
      return name + "(" + std::to_string(d.a) + ")";
    case Family::kPeriodic:
      return name + "(" + std::to_string(d.alphabet) + ";" + format_symbols(d.pattern) + ")";
    case Family::kBinaryExpansion:
      return name + "(" + std::to_string(d.a) + ";" + std::to_string(d.b) + ")";
    case Family::kRadix:
      return name + "(" + std::to_string(d.a) + ";" + std::to_string(d.alphabet) + ")";
    case Family::kConditionalMarkov:
      return name + "(" + std::to_string(d.side) + ";" + join_rows(d.rows) + ")";
  }
  return name;
}

Bits serialize(const ModelDescription& d) {
  Bits out;
  elias_delta_encode(static_cast<std::uint64_t>(d.family) + 1, out);
  switch (d.family) {
    case Family::kBernoulli:
      put_rational(d.rows[0][0], out);
      break;
    case Family::kCategorical:
      put_uint(static_cast<std::uint64_t>(d.alphabet), out);
      put_rows(d, out);
      break;
    case Family::kMarkov:
      put_uint(d.a, out);
      put_uint(static_cast<std::uint64_t>(d.alphabet), out);
      put_rows(d, out);
      break;
    case Family::kKT:
      put_uint(static_cast<std::uint64_t>(d.alphabet), out);
      break;
    case Family::kStep:
      put_uint(d.a, out);
      break;
    case Family::kPeriodic:
      put_uint(static_cast<std::uint64_t>(d.alphabet), out);
      put_uint(d.pattern.size(), out);
      for (Symbol s : d.pattern) put_uint(s, out);
      break;
    case Family::kBinaryExpansion:
      put_uint(d.b, out);
      put_uint(d.a, out);
      break;
    case Family::kRadix:
      put_uint(static_cast<std::uint64_t>(d.alphabet), out);
      put_uint(d.a, out);
      break;
    case Family::kConditionalIID:
      put_uint(static_cast<std::uint64_t>(d.side), out);
      put_uint(static_cast<std::uint64_t>(d.alphabet), out);
      put_rows(d, out);
      break;
    case Family::kConditionalMarkov:
      put_uint(static_cast<std::uint64_t>(d.side), out);
      put_uint(static_cast<std::uint64_t>(d.alphabet), out);
      put_rows(d, out);
      break;
  }
  return out;
}

ModelDescription deserialize(const Bits& bits, std::size_t& pos) {
  ModelDescription d;
  const auto tag = elias_delta_decode(bits, pos) - 1;
  if (tag > static_cast<std::uint64_t>(Family::kConditionalMarkov)) {
    throw InvalidArgument("deserialize: unknown family tag " + std::to_string(tag));
  }
  d.family = static_cast<Family>(tag);
  auto small = [&](const char* what) {
    const auto v = get_uint(bits, pos);
    if (v > 1'000'000) throw InvalidArgument(std::string("deserialize: ") + what + " too large");
    return static_cast<int>(v);
  };
  switch (d.family) {
    case Family::kBernoulli:
      d.rows = {{get_rational(bits, pos)}};
      break;
    case Family::kCategorical:
      d.alphabet = small("alphabet");
      d.rows = get_rows(bits, pos, 1, static_cast<std::uint64_t>(d.alphabet));
      break;
    case Family::kMarkov:
      d.a = get_uint(bits, pos);
      if (d.a > 8) throw InvalidArgument("deserialize: markov order above 8");
      d.alphabet = small("alphabet");
      if (d.alphabet < 2) throw InvalidArgument("deserialize: alphabet size must be >= 2");
      d.rows = get_rows(bits, pos, ipow(static_cast<std::uint64_t>(d.alphabet), d.a),
                        static_cast<std::uint64_t>(d.alphabet));
      break;
    case Family::kKT:
      d.alphabet = small("alphabet");
      break;
    case Family::kStep:
      d.a = get_uint(bits, pos);
      break;
    case Family::kPeriodic: {
      d.alphabet = small("alphabet");
      const auto len = get_uint(bits, pos);
      if (len > bits.size()) throw InvalidArgument("deserialize: pattern longer than the input");
      for (std::uint64_t i = 0; i < len; ++i) d.pattern.push_back(static_cast<Symbol>(get_uint(bits, pos)));
      break;
    }
    case Family::kBinaryExpansion:
      d.b = get_uint(bits, pos);
      d.a = get_uint(bits, pos);
      break;
    case Family::kRadix:
      d.alphabet = small("alphabet");
      d.a = get_uint(bits, pos);
      break;
    case Family::kConditionalIID:
      d.side = small("side alphabet");
      d.alphabet = small("alphabet");
      d.rows = get_rows(bits, pos, static_cast<std::uint64_t>(d.side), static_cast<std::uint64_t>(d.alphabet));
      break;
    case Family::kConditionalMarkov:
      d.side = small("side alphabet");
      d.alphabet = small("alphabet");
      d.rows = get_rows(bits, pos, static_cast<std::uint64_t>(d.side) * static_cast<std::uint64_t>(d.alphabet),
                        static_cast<std::uint64_t>(d.alphabet));
      break;
  }
  for (auto& row : d.rows) {
    for (auto& p : row) {
      if (p.den == 0) throw InvalidArgument("deserialize: zero denominator");
      p = reduced(p.num, p.den);
    }
  }
  validate(d);
  return d;
}

ModelDescription deserialize(const Bits& bits) {
  std::size_t pos = 0;
  auto d = deserialize(bits, pos);
  if (pos != bits.size()) throw InvalidArgument("deserialize: trailing bits after the description");
  return d;
}

std::size_t description_length(const ModelDescription& d) { return serialize(d).size(); }

bool is_conditional(const ModelDescription& d) {
  return d.family == Family::kConditionalIID || d.family == Family::kConditionalMarkov;
}

bool is_deterministic(const ModelDescription& d) {
  return d.family == Family::kStep || d.family == Family::kPeriodic || d.family == Family::kBinaryExpansion ||
         d.family == Family::kRadix;
}

SequencePtr build_sequence(const ModelDescription& d) {
  switch (d.family) {
    case Family::kStep:
      return step_sequence(d.a);
    case Family::kPeriodic:
      return periodic_sequence(d.pattern, Alphabet(d.alphabet));
    case Family::kBinaryExpansion:
      return binary_expansion_sequence(d.a, static_cast<int>(d.b));
    case Family::kRadix:
      return radix_sequence(d.a, Alphabet(d.alphabet));
    default:
      throw InvalidArgument(std::string(family_name(d.family)) + " does not describe a deterministic sequence");
  }
}

SemimeasurePtr build_semimeasure(const ModelDescription& d) {
  switch (d.family) {
    case Family::kBernoulli:
      return std::make_shared<BernoulliModel>(d.rows[0][0].value());
    case Family::kCategorical:
      return std::make_shared<CategoricalModel>(to_doubles(d.rows)[0]);
    case Family::kMarkov:
      return std::make_shared<MarkovModel>(static_cast<int>(d.a), to_doubles(d.rows));
    case Family::kKT:
      return std::make_shared<KTModel>(Alphabet(d.alphabet));
    case Family::kStep:
    case Family::kPeriodic:
    case Family::kBinaryExpansion:
    case Family::kRadix:
      return std::make_shared<DeterministicSequenceModel>(build_sequence(d));
    case Family::kConditionalIID:
    case Family::kConditionalMarkov:
      break;
  }
  throw InvalidArgument(std::string(family_name(d.family)) + " is conditional; it needs a side stream");
}

sideinfo::ChronologicalPtr build_chronological(const ModelDescription& d, int side_size) {
  if (d.family == Family::kConditionalIID) return std::make_shared<sideinfo::ConditionalIID>(to_doubles(d.rows));
  if (d.family == Family::kConditionalMarkov) {
    return std::make_shared<sideinfo::ConditionalMarkov>(d.side, to_doubles(d.rows));
  }
  return std::make_shared<sideinfo::IgnoreSide>(build_semimeasure(d), SideAlphabet(side_size));
}

void elias_delta_encode(std::uint64_t n, Bits& out) {
  if (n == 0) throw InvalidArgument("Elias-delta codes positive integers only");
  const int N = std::bit_width(n);                              // bits of n
  const int L = std::bit_width(static_cast<std::uint64_t>(N));  // bits of N
  for (int i = 0; i < L - 1; ++i) out.push_back(false);
  for (int i = L - 1; i >= 0; --i) out.push_back(((N >> i) & 1) != 0);
  for (int i = N - 2; i >= 0; --i) out.push_back(((n >> i) & 1) != 0);
}

std::uint64_t elias_delta_decode(const Bits& bits, std::size_t& pos) {
  int zeros = 0;
  while (true) {
    if (pos >= bits.size()) throw InvalidArgument("Elias-delta: truncated code");
    if (bits[pos]) break;
    ++zeros;
    ++pos;
  }
  if (zeros > 6) throw InvalidArgument("Elias-delta: value too large");
  std::uint64_t N = 0;
  for (int i = 0; i <= zeros; ++i) {
    if (pos >= bits.size()) throw InvalidArgument("Elias-delta: truncated code");
    N = (N << 1) | (bits[pos++] ? 1 : 0);
  }
  if (N > 64) throw InvalidArgument("Elias-delta: value too large");
  std::uint64_t n = 1;
  for (std::uint64_t i = 0; i + 1 < N; ++i) {
    if (pos >= bits.size()) throw InvalidArgument("Elias-delta: truncated code");
    n = (n << 1) | (bits[pos++] ? 1 : 0);
  }
  return n;
}

std::size_t elias_delta_length(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("Elias-delta codes positive integers only");
  const auto N = static_cast<std::size_t>(std::bit_width(n));
  const auto L = static_cast<std::size_t>(std::bit_width(N));
  return N + 2 * L - 2;
}

std::vector<double> universal_weights(const std::vector<ModelDescription>& models) {
  std::set<Bits> seen;
  std::vector<double> out;
  for (const auto& m : models) {
    auto bits = serialize(m);
    if (!seen.insert(bits).second) {
      throw InvalidArgument("universal_weights: duplicate description " + to_text(m));
    }
    out.push_back(std::ldexp(1.0, -static_cast<int>(bits.size())));
  }
  return out;
}

std::vector<double> index_weights(std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(std::ldexp(1.0, -static_cast<int>(elias_delta_length(i))));
  return out;
}

}  // namespace unilearn::desc
