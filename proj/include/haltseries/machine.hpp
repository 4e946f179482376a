#pragma once

// Unlimited-register counter machine: {inc, decjz, halt} over unbounded
// naturals. Register 0 carries the input; all other registers start at zero.

#include "haltseries/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hs {

using StepCount = std::uint64_t;
using RegisterIndex = std::uint32_t;
using InstructionIndex = std::uint32_t;

/// Register indices the parser accepts without a `registers` directive.
inline constexpr RegisterIndex kMaxInferredRegisters = 4096;

struct Inc {
  RegisterIndex reg;
  friend bool operator==(const Inc&, const Inc&) = default;
};

/// Decrement `reg` and fall through if it is positive, else jump to `target`.
struct DecJz {
  RegisterIndex reg;
  InstructionIndex target;
  friend bool operator==(const DecJz&, const DecJz&) = default;
};

struct Halt {
  friend bool operator==(const Halt&, const Halt&) = default;
};

using Instruction = std::variant<Inc, DecJz, Halt>;

class MachineProgram {
 public:
  /// Validates the invariants; throws std::invalid_argument on violation.
  MachineProgram(std::vector<Instruction> instructions, RegisterIndex register_count);

  /// Smallest register count that covers every referenced register (at least 1).
  static MachineProgram with_inferred_registers(std::vector<Instruction> instructions);

  const std::vector<Instruction>& instructions() const noexcept { return instructions_; }
  RegisterIndex register_count() const noexcept { return register_count_; }
  std::size_t size() const noexcept { return instructions_.size(); }

  friend bool operator==(const MachineProgram&, const MachineProgram&) = default;

 private:
  std::vector<Instruction> instructions_;
  RegisterIndex register_count_;
};

struct MachineState {
  std::size_t pc = 0;
  std::vector<Natural> registers;
  StepCount steps_executed = 0;

  bool halted(const MachineProgram& program) const noexcept { return pc >= program.size(); }
};

struct HaltedAt {
  StepCount steps;
  friend bool operator==(const HaltedAt&, const HaltedAt&) = default;
};

struct RunningAfter {
  StepCount budget;
  friend bool operator==(const RunningAfter&, const RunningAfter&) = default;
};

using ExecutionOutcome = std::variant<HaltedAt, RunningAfter>;

/// Source format: one instruction per line, `label:` prefix optional, `#`
/// comments, `inc R`, `decjz R TARGET`, `halt`. TARGET is a label or a
/// 0-based instruction index. An optional `registers N` line fixes the
/// register count. Throws ParseError carrying the offending line.
MachineProgram parse_program(std::string_view text);

/// Canonical source text; `parse_program(format_program(p)) == p`.
std::string format_program(const MachineProgram& program);

MachineState initial_state(const MachineProgram& program, const Natural& input);

/// One step of the operational semantics. Throws std::logic_error if the
/// state is already halted.
MachineState step(const MachineProgram& program, MachineState state);

/// Steps `state` in place. Same contract as step().
void step_in_place(const MachineProgram& program, MachineState& state);

ExecutionOutcome run_bounded(const MachineProgram& program, const Natural& input, StepCount budget);

/// f(n): whether the run on `input` has halted within `n` steps.
bool halted_by(const MachineProgram& program, const Natural& input, StepCount n);

/// Incremental execution, resumable across calls. Owns a copy of the program.
class Execution {
 public:
  Execution(MachineProgram program, const Natural& input);

  /// Steps until halted or `steps() == limit`, whichever comes first.
  void run_until(StepCount limit);

  bool halted() const noexcept { return state_.halted(program_); }
  StepCount steps() const noexcept { return state_.steps_executed; }
  const MachineState& state() const noexcept { return state_; }
  const MachineProgram& program() const noexcept { return program_; }

 private:
  MachineProgram program_;
  MachineState state_;
};

std::string to_string(const ExecutionOutcome& outcome);

}  // namespace hs
