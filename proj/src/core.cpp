#include <atomic>
#include <cstdlib>
#include <thread>

#include "unilearn/core.hpp"
#include "unilearn/parallel.hpp"
#include "unilearn/rng.hpp"

namespace unilearn {

void validate_string(Alphabet alphabet, SymbolView x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!alphabet.contains(x[i])) {
      throw InvalidArgument("symbol " + std::to_string(x[i]) + " at position " + std::to_string(i) +
                            " is outside an alphabet of size " + std::to_string(alphabet.size()));
    }
  }
}

SymbolString parse_symbols(const std::string& text, int alphabet_size) {
  SymbolString out;
  out.reserve(text.size());
  for (char c : text) {
    if (c < '0' || c > '9') throw InvalidArgument("expected a digit string, got '" + text + "'");
    const Symbol s = static_cast<Symbol>(c - '0');
    if (s >= static_cast<Symbol>(alphabet_size)) {
      throw InvalidArgument("symbol " + std::string(1, c) + " is outside an alphabet of size " +
                            std::to_string(alphabet_size));
    }
    out.push_back(s);
  }
  return out;
}

std::string format_symbols(SymbolView x) {
  std::string out;
  out.reserve(x.size());
  for (Symbol s : x) {
    if (s < 10) {
      out.push_back(static_cast<char>('0' + s));
    } else {
      out += "[" + std::to_string(s) + "]";
    }
  }
  return out;
}

namespace {
std::atomic<int> g_worker_override{0};
}

int default_workers() {
  if (int o = g_worker_override.load(); o > 0) return o;
  if (const char* env = std::getenv("UNILEARN_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_default_workers(int workers) { g_worker_override.store(workers < 0 ? 0 : workers); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

Rng Rng::split(std::string_view label) const { return Rng(splitmix64(seed_ ^ fnv1a64(label))); }

Rng Rng::split(std::uint64_t index) const {
  return Rng(splitmix64(splitmix64(seed_) + 0x632be59bd9b4e019ULL * (index + 1)));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below requires a positive bound");
  // Rejection sampling keeps the draw unbiased and platform independent.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  while (true) {
    const std::uint64_t v = engine_();
    if (v < limit) return v % bound;
  }
}

}  // namespace unilearn
