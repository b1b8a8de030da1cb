#include "unilearn/monotone_vm.hpp"

#include <cmath>
#include <map>

#include "unilearn/parallel.hpp"
#include "unilearn/rng.hpp"

namespace unilearn::vm {

ProgramBits parse_bits(const std::string& text) {
  ProgramBits bits;
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(c == '1');
    } else if (c != ' ' && c != '_' && c != '\t') {
      throw InvalidArgument("program bits may only contain 0, 1, spaces and '_': '" + text + "'");
    }
  }
  return bits;
}

std::string format_bits(const ProgramBits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (bool b : bits) out.push_back(b ? '1' : '0');
  return out;
}

ProgramBits assemble(const std::vector<std::string>& tokens, OpcodeWidth width) {
  static const std::map<std::string, unsigned> kCodes = {
      {"MOVE_RIGHT", 0}, {">", 0}, {"MOVE_LEFT", 1}, {"<", 1}, {"INC", 2},        {"+", 2},
      {"DEC", 3},        {"-", 3}, {"READ", 4},      {",", 4}, {"OUT", 5},        {".", 5},
      {"LOOP_BEGIN", 6}, {"[", 6}, {"LOOP_END", 7},  {"]", 7}, {"READ_Y", 8},     {"Y", 8},
  };
  const int w = static_cast<int>(width);
  ProgramBits bits;
  for (const auto& tok : tokens) {
    if (tok == "0" || tok == "1") {
      bits.push_back(tok == "1");
      continue;
    }
    auto it = kCodes.find(tok);
    if (it == kCodes.end()) throw InvalidArgument("unknown opcode '" + tok + "'");
    if (it->second >= 8 && width == OpcodeWidth::kThreeBit) {
      throw InvalidArgument("READ_Y needs the 4-bit conditional instruction set");
    }
    for (int b = w - 1; b >= 0; --b) bits.push_back(((it->second >> b) & 1u) != 0);
  }
  return bits;
}

Machine::Machine(MachineConfig config, const SymbolString* side) : config_(config), side_(side) {}

std::uint8_t& Machine::cell() { return tape_[head_]; }

bool Machine::at_halt_point() const {
  return fault_reason_.empty() && !pending_read_ && ip_ == code_.size() && partial_bits_ == 0 && skip_depth_ == 0 &&
         open_.empty();
}

void Machine::decode(unsigned value) {
  Op op;
  if (value < 8) {
    op = static_cast<Op>(value);
  } else if (value == 8) {
    op = Op::kReadY;
  } else {
    fault_reason_ = "undefined opcode " + std::to_string(value);
    return;
  }
  const std::size_t idx = code_.size();
  code_.push_back(op);
  match_.push_back(-1);
  if (op == Op::kLoopBegin) {
    open_.push_back(idx);
  } else if (op == Op::kLoopEnd && !open_.empty()) {
    const std::size_t begin = open_.back();
    open_.pop_back();
    match_[begin] = static_cast<long>(idx);
    match_[idx] = static_cast<long>(begin);
  }
}

void Machine::feed(bool bit) {
  ++bits_consumed_;
  if (pending_read_) {
    pending_read_ = false;
    cell() = bit ? 1 : 0;
    ++ip_;
    return;
  }
  partial_ = (partial_ << 1) | (bit ? 1u : 0u);
  if (++partial_bits_ == static_cast<int>(config_.width)) {
    decode(partial_);
    partial_ = 0;
    partial_bits_ = 0;
  }
}

Machine::Event Machine::run(std::size_t step_budget) {
  while (true) {
    if (!fault_reason_.empty()) return Event::kFault;
    if (pending_read_ || ip_ == code_.size()) return Event::kNeedBit;
    if (steps_ >= step_budget) return Event::kOutOfSteps;
    const Op op = code_[ip_];
    ++steps_;
    if (skip_depth_ > 0) {
      if (op == Op::kLoopBegin) {
        ++skip_depth_;
      } else if (op == Op::kLoopEnd) {
        --skip_depth_;
      }
      ++ip_;
      continue;
    }
    switch (op) {
      case Op::kMoveRight:
        if (++head_ == tape_.size()) tape_.push_back(0);
        ++ip_;
        break;
      case Op::kMoveLeft:
        if (head_ == 0) {
          tape_.insert(tape_.begin(), 0);
        } else {
          --head_;
        }
        ++ip_;
        break;
      case Op::kInc:
        ++cell();
        ++ip_;
        break;
      case Op::kDec:
        --cell();
        ++ip_;
        break;
      case Op::kRead:
        pending_read_ = true;
        return Event::kNeedBit;
      case Op::kOut:
        output_.push_back(static_cast<Symbol>(cell() % config_.output_alphabet.size()));
        emit_bits_.push_back(bits_consumed_);
        ++ip_;
        return Event::kEmitted;
      case Op::kLoopBegin:
        if (cell() == 0) skip_depth_ = 1;
        ++ip_;
        break;
      case Op::kLoopEnd:
        if (cell() != 0 && match_[ip_] >= 0) {
          ip_ = static_cast<std::size_t>(match_[ip_]) + 1;
        } else {
          ++ip_;
        }
        break;
      case Op::kReadY:
        if (side_ == nullptr || side_read_ >= side_->size()) {
          fault_reason_ = "READ_Y past the end of the side tape";
          return Event::kFault;
        }
        if (side_read_ > output_.size()) {
          fault_reason_ = "READ_Y would read beyond y_{1:n+1} with n symbols output";
          return Event::kFault;
        }
        cell() = static_cast<std::uint8_t>((*side_)[side_read_++] & 0xffu);
        ++ip_;
        break;
    }
  }
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kRunning:
      return "running";
    case RunStatus::kHalted:
      return "halted";
    case RunStatus::kNeedsInput:
      return "needs_input";
    case RunStatus::kInvalid:
      return "invalid";
  }
  return "?";
}

ExecutionOutcome run_program(const ProgramBits& bits, std::size_t step_budget, std::size_t max_output,
                             const MachineConfig& config, const SymbolString* side) {
  Machine m(config, side);
  ExecutionOutcome out;
  std::size_t next_bit = 0;
  bool done = false;
  while (!done) {
    if (m.output().size() >= max_output) {
      out.status = RunStatus::kRunning;
      break;
    }
    switch (m.run(step_budget)) {
      case Machine::Event::kEmitted:
        break;
      case Machine::Event::kNeedBit:
        if (next_bit < bits.size()) {
          m.feed(bits[next_bit++]);
        } else {
          out.status = m.at_halt_point() ? RunStatus::kHalted : RunStatus::kNeedsInput;
          done = true;
        }
        break;
      case Machine::Event::kOutOfSteps:
        out.status = RunStatus::kRunning;
        done = true;
        break;
      case Machine::Event::kFault:
        out.status = RunStatus::kInvalid;
        done = true;
        break;
    }
  }
  out.output = m.output();
  out.emit_bits = m.emit_bits();
  out.bits_consumed = m.bits_consumed();
  out.steps = m.steps();
  return out;
}

double ProgramCensus::mass() const {
  double total = 0.0;
  for (std::size_t k = 0; k < count_by_length.size(); ++k) {
    if (count_by_length[k] != 0) total += std::ldexp(static_cast<double>(count_by_length[k]), -static_cast<int>(k));
  }
  return total;
}

std::optional<int> ProgramCensus::shortest() const {
  for (std::size_t k = 0; k < count_by_length.size(); ++k) {
    if (count_by_length[k] != 0) return static_cast<int>(k);
  }
  return std::nullopt;
}

namespace {

// Subtrees below this many bits become independent work items.
constexpr int kSplitDepth = 8;

template <typename Visitor>
void explore(Machine m, const Budget& budget, Visitor& visitor, std::vector<Machine>* frontier, int split_depth) {
  while (true) {
    switch (m.run(budget.step_budget)) {
      case Machine::Event::kEmitted:
        if (!visitor.on_emit(m)) return;
        break;
      case Machine::Event::kNeedBit: {
        if (frontier != nullptr && static_cast<int>(m.bits_consumed()) == split_depth) {
          frontier->push_back(std::move(m));
          return;
        }
        if (!visitor.on_need_bit(m)) return;
        if (static_cast<int>(m.bits_consumed()) >= budget.max_len) return;
        Machine zero = m;
        zero.feed(false);
        explore(std::move(zero), budget, visitor, frontier, split_depth);
        m.feed(true);
        break;
      }
      case Machine::Event::kOutOfSteps:
      case Machine::Event::kFault:
        return;
    }
  }
}

// Explores the whole program tree; the part above split depth runs inline,
// each subtree below it is a separate work item. Visitors are merged in
// frontier order so the result does not depend on the worker count.
template <typename Visitor, typename Make>
Visitor enumerate(const MachineConfig& config, const SymbolString* side, const Budget& budget, Make make) {
  if (budget.max_len < 0) throw InvalidArgument("max_len must be >= 0");
  Visitor head = make();
  std::vector<Machine> frontier;
  const int split = std::min(kSplitDepth, budget.max_len);
  explore(Machine(config, side), budget, head, &frontier, split);
  auto parts = parallel_map<Visitor>(frontier.size(), [&](std::size_t i) {
    Visitor v = make();
    explore(frontier[i], budget, v, nullptr, 0);
    return v;
  });
  for (auto& p : parts) head.merge(p);
  return head;
}

struct CensusVisitor {
  const SymbolString* target = nullptr;
  ProgramCensus census;

  void credit(std::size_t k) {
    if (census.count_by_length.size() <= k) census.count_by_length.resize(k + 1, 0);
    ++census.count_by_length[k];
  }
  bool on_emit(const Machine& m) {
    const std::size_t n = m.output().size();
    if (m.output().back() != (*target)[n - 1]) return false;
    if (n == target->size()) {
      credit(m.emit_bits().back());
      return false;
    }
    return true;
  }
  bool on_need_bit(const Machine&) { return true; }
  void merge(const CensusVisitor& other) {
    const auto& o = other.census.count_by_length;
    if (census.count_by_length.size() < o.size()) census.count_by_length.resize(o.size(), 0);
    for (std::size_t k = 0; k < o.size(); ++k) census.count_by_length[k] += o[k];
  }
};

struct TableVisitor {
  std::size_t n = 0;
  int k = 2;
  std::vector<ProgramCensus> by_string;

  bool on_emit(const Machine& m) {
    if (m.output().size() < n) return true;
    std::size_t idx = 0;
    for (Symbol s : m.output()) idx = idx * static_cast<std::size_t>(k) + s;
    auto& c = by_string[idx].count_by_length;
    const std::size_t len = m.emit_bits().back();
    if (c.size() <= len) c.resize(len + 1, 0);
    ++c[len];
    return false;
  }
  bool on_need_bit(const Machine&) { return true; }
  void merge(const TableVisitor& other) {
    for (std::size_t i = 0; i < by_string.size(); ++i) {
      auto& mine = by_string[i].count_by_length;
      const auto& theirs = other.by_string[i].count_by_length;
      if (mine.size() < theirs.size()) mine.resize(theirs.size(), 0);
      for (std::size_t j = 0; j < theirs.size(); ++j) mine[j] += theirs[j];
    }
  }
};

struct HaltingVisitor {
  const SymbolString* target = nullptr;
  std::optional<int> best;

  bool on_emit(const Machine& m) {
    const std::size_t n = m.output().size();
    return n <= target->size() && m.output().back() == (*target)[n - 1];
  }
  bool on_need_bit(const Machine& m) {
    const int here = static_cast<int>(m.bits_consumed());
    if (best && *best <= here) return false;
    if (m.at_halt_point() && m.output().size() == target->size()) {
      best = here;  // output already matches the target prefix-wise
      return false;
    }
    return true;
  }
  void merge(const HaltingVisitor& other) {
    if (other.best && (!best || *other.best < *best)) best = other.best;
  }
};

}  // namespace

ProgramCensus approx_M_census(SymbolView x, Budget budget, const MachineConfig& config, const SymbolString* side) {
  validate_string(config.output_alphabet, x);
  if (x.empty()) {
    ProgramCensus c;
    c.count_by_length = {1};
    return c;
  }
  const SymbolString target(x.begin(), x.end());
  auto v = enumerate<CensusVisitor>(config, side, budget, [&] {
    CensusVisitor cv;
    cv.target = &target;
    return cv;
  });
  return v.census;
}

double approx_M(SymbolView x, Budget budget, const MachineConfig& config, const SymbolString* side) {
  return approx_M_census(x, budget, config, side).mass();
}

std::vector<double> approx_M_table(std::size_t n, Budget budget, const MachineConfig& config) {
  const int k = config.output_alphabet.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= static_cast<std::size_t>(k);
  if (n == 0) return {1.0};
  auto v = enumerate<TableVisitor>(config, nullptr, budget, [&] {
    TableVisitor tv;
    tv.n = n;
    tv.k = k;
    tv.by_string.resize(count);
    return tv;
  });
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = v.by_string[i].mass();
  return out;
}

std::optional<int> approx_Km(SymbolView x, Budget budget, const MachineConfig& config) {
  return approx_M_census(x, budget, config).shortest();
}

std::optional<int> approx_K(SymbolView x, Budget budget, const MachineConfig& config) {
  validate_string(config.output_alphabet, x);
  const SymbolString target(x.begin(), x.end());
  auto v = enumerate<HaltingVisitor>(config, nullptr, budget, [&] {
    HaltingVisitor hv;
    hv.target = &target;
    return hv;
  });
  return v.best;
}

SampleEstimate sample_M(SymbolView x, std::uint64_t n_samples, std::size_t step_budget, int max_len,
                        std::uint64_t seed, const MachineConfig& config) {
  if (n_samples == 0) throw InvalidArgument("sample_M needs at least one sample");
  validate_string(config.output_alphabet, x);
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (n_samples + kChunk - 1) / kChunk;
  const Rng root = Rng(seed).split("sample_M");
  auto hits = parallel_map<std::uint64_t>(chunks, [&](std::size_t c) {
    Rng rng = root.split(static_cast<std::uint64_t>(c));
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(n_samples, begin + kChunk);
    std::uint64_t h = 0;
    for (std::uint64_t s = begin; s < end; ++s) {
      if (x.empty()) {
        ++h;
        continue;
      }
      Machine m(config);
      bool done = false;
      while (!done) {
        switch (m.run(step_budget)) {
          case Machine::Event::kEmitted: {
            const std::size_t n = m.output().size();
            if (m.output().back() != x[n - 1]) {
              done = true;
            } else if (n == x.size()) {
              ++h;
              done = true;
            }
            break;
          }
          case Machine::Event::kNeedBit:
            if (max_len >= 0 && static_cast<int>(m.bits_consumed()) >= max_len) {
              done = true;
            } else {
              m.feed(rng.bit());
            }
            break;
          case Machine::Event::kOutOfSteps:
          case Machine::Event::kFault:
            done = true;
            break;
        }
      }
    }
    return h;
  });
  SampleEstimate est;
  est.samples = n_samples;
  for (auto h : hits) est.hits += h;
  est.estimate = static_cast<double>(est.hits) / static_cast<double>(n_samples);
  est.standard_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(n_samples));
  return est;
}

SequencePtr program_sequence(const ProgramBits& bits, std::size_t step_budget, std::size_t max_output,
                             const MachineConfig& config) {
  auto outcome = run_program(bits, step_budget, max_output, config);
  return finite_sequence(std::move(outcome.output), config.output_alphabet);
}

}  // namespace unilearn::vm
