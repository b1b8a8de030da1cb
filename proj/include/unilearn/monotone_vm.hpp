#pragma once

// Reference monotone machine U and program enumeration.
//
// Programs are bit strings read through a one-way input tape. Instructions
// are decoded lazily from that same tape, so the bits a program "uses" are
// exactly the bits the machine has consumed.
//
//   3-bit opcodes              4-bit opcodes (conditional mode)
//   000 MOVE_RIGHT             0000..0111 as on the left
//   001 MOVE_LEFT              1000 READ_Y
//   010 INC                    1001..1111 invalid
//   011 DEC
//   100 READ        next input bit -> current cell
//   101 OUT         emit current cell mod |X|
//   110 LOOP_BEGIN  skip past the matching LOOP_END if the cell is 0
//   111 LOOP_END    jump back past the matching LOOP_BEGIN if the cell is not 0
//
// Work tape cells are bytes (arithmetic wraps mod 256) on a tape unbounded in
// both directions. Each executed instruction is one step; skipping forward
// over a loop body costs one step per scanned instruction. A LOOP_END with no
// open LOOP_BEGIN is a no-op. READ_Y copies the next side symbol into the
// cell and faults if that would read more side symbols than (symbols output
// so far) + 1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unilearn/core.hpp"
#include "unilearn/sequences.hpp"

namespace unilearn::vm {

/// Embedded in every experiment output for provenance.
inline constexpr const char* kMachineVersion = "unilearn-bfm-1 (3-bit/4-bit lazy opcodes, byte cells)";

enum class OpcodeWidth { kThreeBit = 3, kFourBit = 4 };

enum class Op : std::uint8_t { kMoveRight, kMoveLeft, kInc, kDec, kRead, kOut, kLoopBegin, kLoopEnd, kReadY };

struct MachineConfig {
  Alphabet output_alphabet{2};
  OpcodeWidth width = OpcodeWidth::kThreeBit;
};

using ProgramBits = std::vector<bool>;

/// "101 010" style strings; whitespace and '_' are ignored.
ProgramBits parse_bits(const std::string& text);
std::string format_bits(const ProgramBits& bits);

/// Bits of a program given as opcode names, e.g. {"INC", "LOOP_BEGIN", "OUT"}.
/// READ may be followed by its data bit as a separate "0"/"1" token.
ProgramBits assemble(const std::vector<std::string>& tokens, OpcodeWidth width = OpcodeWidth::kThreeBit);

/// Resumable interpreter state. run() advances until something the caller
/// must react to happens; the enumerator copies the machine at every input
/// bit it branches on.
class Machine {
 public:
  enum class Event {
    kNeedBit,     // wants the next input bit; call feed()
    kEmitted,     // appended one symbol to the output
    kOutOfSteps,  // step budget exhausted
    kFault,       // invalid opcode or chronology violation
  };

  explicit Machine(MachineConfig config, const SymbolString* side = nullptr);

  Event run(std::size_t step_budget);
  void feed(bool bit);

  /// When the machine waits for a bit, whether stopping the input here
  /// counts as halting: the request starts a fresh opcode, no forward skip is
  /// in progress and no LOOP_BEGIN is left open.
  bool at_halt_point() const;

  const SymbolString& output() const { return output_; }
  /// Bits consumed at the moment output()[i] was emitted.
  const std::vector<std::size_t>& emit_bits() const { return emit_bits_; }
  std::size_t bits_consumed() const { return bits_consumed_; }
  std::size_t steps() const { return steps_; }
  std::size_t side_read() const { return side_read_; }
  const std::string& fault_reason() const { return fault_reason_; }

 private:
  std::uint8_t& cell();
  void decode(unsigned value);

  MachineConfig config_;
  const SymbolString* side_;
  std::vector<Op> code_;
  std::vector<long> match_;       // partner of each loop instruction, -1 if unknown/unmatched
  std::vector<std::size_t> open_; // LOOP_BEGINs whose LOOP_END is not decoded yet
  std::size_t ip_ = 0;
  std::vector<std::uint8_t> tape_{0};
  std::size_t head_ = 0;
  std::size_t bits_consumed_ = 0;
  unsigned partial_ = 0;
  int partial_bits_ = 0;
  bool pending_read_ = false;
  std::size_t skip_depth_ = 0;  // >0 while scanning forward for a LOOP_END
  std::size_t side_read_ = 0;
  SymbolString output_;
  std::vector<std::size_t> emit_bits_;
  std::size_t steps_ = 0;
  std::string fault_reason_;
};

enum class RunStatus { kRunning, kHalted, kNeedsInput, kInvalid };

const char* to_string(RunStatus status);

struct ExecutionOutcome {
  SymbolString output;
  std::vector<std::size_t> emit_bits;
  std::size_t bits_consumed = 0;
  std::size_t steps = 0;
  RunStatus status = RunStatus::kRunning;
};

/// Runs a finite program. kRunning covers both an exhausted step budget and
/// reaching max_output symbols.
ExecutionOutcome run_program(const ProgramBits& bits, std::size_t step_budget, std::size_t max_output,
                             const MachineConfig& config = {}, const SymbolString* side = nullptr);

struct Budget {
  int max_len = 0;             // L: programs longer than this are not explored
  std::size_t step_budget = 0; // T: per-path instruction budget
};

/// Minimal programs credited to one target, counted by length.
struct ProgramCensus {
  std::vector<std::uint64_t> count_by_length;  // index = program length in bits

  double mass() const;                     // sum_k count_k 2^-k
  std::optional<int> shortest() const;
};

/// Lower bound on M(x): sum of 2^-k over the minimal programs (length <= L,
/// steps <= T) whose output starts with x, k being the bits consumed when the
/// last symbol of x was emitted.
double approx_M(SymbolView x, Budget budget, const MachineConfig& config = {}, const SymbolString* side = nullptr);

ProgramCensus approx_M_census(SymbolView x, Budget budget, const MachineConfig& config = {},
                              const SymbolString* side = nullptr);

/// approx_M for every string of length n in one traversal, indexed in
/// lexicographic order (the order of for_each_string).
std::vector<double> approx_M_table(std::size_t n, Budget budget, const MachineConfig& config = {});

/// Shortest program found that outputs a string starting with x.
std::optional<int> approx_Km(SymbolView x, Budget budget, const MachineConfig& config = {});

/// Shortest program found that halts with output exactly x.
std::optional<int> approx_K(SymbolView x, Budget budget, const MachineConfig& config = {});

struct SampleEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

/// Fraction of uniformly random input streams whose execution outputs a
/// string starting with x within the budget. max_len < 0 means no length cap;
/// with the same budget as approx_M the expectation equals approx_M exactly.
SampleEstimate sample_M(SymbolView x, std::uint64_t n_samples, std::size_t step_budget, int max_len,
                        std::uint64_t seed, const MachineConfig& config = {});

/// A deterministic hypothesis backed by a program: the (possibly finite)
/// output of the program, computed once within the given budget.
SequencePtr program_sequence(const ProgramBits& bits, std::size_t step_budget, std::size_t max_output,
                             const MachineConfig& config = {});

}  // namespace unilearn::vm
