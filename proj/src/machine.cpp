#include "haltseries/machine.hpp"

#include "haltseries/errors.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hs {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

RegisterIndex referenced_register(const Instruction& instruction) {
  return std::visit(Overloaded{[](const Inc& i) { return i.reg; },
                               [](const DecJz& d) { return d.reg; },
                               [](const Halt&) { return RegisterIndex{0}; }},
                    instruction);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_number(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_index(std::string_view token, std::size_t line, const char* what) {
  if (!is_number(token)) throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(token) + "'");
  if (token.size() > 10) throw ParseError(line, std::string(what) + " out of range: " + std::string(token));
  std::uint64_t value = std::stoull(std::string(token));
  if (value > std::numeric_limits<std::uint32_t>::max())
    throw ParseError(line, std::string(what) + " out of range: " + std::string(token));
  return value;
}

struct PendingJump {
  std::size_t instruction;
  std::size_t line;
  std::string target;
};

}  // namespace

MachineProgram::MachineProgram(std::vector<Instruction> instructions, RegisterIndex register_count)
    : instructions_(std::move(instructions)), register_count_(register_count) {
  if (instructions_.empty()) throw std::invalid_argument("program has no instructions");
  if (register_count_ < 1) throw std::invalid_argument("register count must be at least 1");
  for (std::size_t i = 0; i < instructions_.size(); ++i) {
    const Instruction& ins = instructions_[i];
    if (!std::holds_alternative<Halt>(ins) && referenced_register(ins) >= register_count_)
      throw std::invalid_argument("instruction " + std::to_string(i) + ": register index out of range");
    if (const auto* d = std::get_if<DecJz>(&ins); d && d->target >= instructions_.size())
      throw std::invalid_argument("instruction " + std::to_string(i) + ": dangling jump target");
  }
}

MachineProgram MachineProgram::with_inferred_registers(std::vector<Instruction> instructions) {
  RegisterIndex count = 1;
  for (const auto& ins : instructions)
    if (!std::holds_alternative<Halt>(ins)) count = std::max(count, referenced_register(ins) + 1);
  return MachineProgram(std::move(instructions), count);
}

MachineProgram parse_program(std::string_view text) {
  std::vector<Instruction> instructions;
  std::vector<std::size_t> lines;  // source line of each instruction
  std::map<std::string, std::size_t, std::less<>> labels;
  std::vector<std::pair<std::string, std::size_t>> pending_labels;
  std::vector<PendingJump> jumps;
  std::optional<RegisterIndex> declared_registers;
  std::size_t declared_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (auto colon = line.find(':'); colon != std::string_view::npos) {
      std::string_view label = trim(line.substr(0, colon));
      if (!is_identifier(label)) throw ParseError(line_no, "invalid label '" + std::string(label) + "'");
      if (labels.contains(label) ||
          std::any_of(pending_labels.begin(), pending_labels.end(), [&](auto& p) { return p.first == label; }))
        throw ParseError(line_no, "duplicate label '" + std::string(label) + "'");
      pending_labels.emplace_back(std::string(label), line_no);
      line = trim(line.substr(colon + 1));
      if (line.empty()) continue;
    }

    auto words = split_words(line);
    std::string_view op = words.front();
    auto expect_operands = [&](std::size_t n) {
      if (words.size() != n + 1)
        throw ParseError(line_no, "'" + std::string(op) + "' takes " + std::to_string(n) + " operand(s), got " +
                                      std::to_string(words.size() - 1));
    };

    if (op == "registers") {
      expect_operands(1);
      if (declared_registers) throw ParseError(line_no, "duplicate 'registers' directive");
      if (!pending_labels.empty()) throw ParseError(line_no, "label on a 'registers' directive");
      auto count = parse_index(words[1], line_no, "register count");
      if (count < 1) throw ParseError(line_no, "register count must be at least 1");
      declared_registers = static_cast<RegisterIndex>(count);
      declared_line = line_no;
      continue;
    }

    for (auto& [name, _] : pending_labels) labels.emplace(std::move(name), instructions.size());
    pending_labels.clear();

    if (op == "halt") {
      expect_operands(0);
      instructions.emplace_back(Halt{});
    } else if (op == "inc") {
      expect_operands(1);
      instructions.emplace_back(Inc{static_cast<RegisterIndex>(parse_index(words[1], line_no, "register index"))});
    } else if (op == "decjz") {
      expect_operands(2);
      auto reg = static_cast<RegisterIndex>(parse_index(words[1], line_no, "register index"));
      if (!is_identifier(words[2]) && !is_number(words[2]))
        throw ParseError(line_no, "invalid jump target '" + std::string(words[2]) + "'");
      jumps.push_back({instructions.size(), line_no, std::string(words[2])});
      instructions.emplace_back(DecJz{reg, 0});
    } else {
      throw ParseError(line_no, "unknown instruction '" + std::string(op) + "'");
    }
    lines.push_back(line_no);
  }

  if (!pending_labels.empty())
    throw ParseError(pending_labels.front().second,
                     "label '" + pending_labels.front().first + "' does not precede an instruction");
  if (instructions.empty()) throw ParseError(0, "empty program");

  for (const auto& jump : jumps) {
    std::uint64_t target;
    if (is_number(jump.target)) {
      target = parse_index(jump.target, jump.line, "jump target");
    } else {
      auto it = labels.find(jump.target);
      if (it == labels.end()) throw ParseError(jump.line, "dangling jump target '" + jump.target + "'");
      target = it->second;
    }
    if (target >= instructions.size())
      throw ParseError(jump.line, "dangling jump target '" + jump.target + "'");
    std::get<DecJz>(instructions[jump.instruction]).target = static_cast<InstructionIndex>(target);
  }

  RegisterIndex limit = declared_registers.value_or(kMaxInferredRegisters);
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    if (std::holds_alternative<Halt>(instructions[i])) continue;
    RegisterIndex reg = referenced_register(instructions[i]);
    if (reg >= limit)
      throw ParseError(lines[i], "register index " + std::to_string(reg) + " out of range (limit " +
                                     std::to_string(limit) + (declared_registers ? ", declared on line " +
                                     std::to_string(declared_line) : std::string()) + ")");
  }

  if (declared_registers) return MachineProgram(std::move(instructions), *declared_registers);
  return MachineProgram::with_inferred_registers(std::move(instructions));
}

std::string format_program(const MachineProgram& program) {
  std::set<InstructionIndex> targets;
  for (const auto& ins : program.instructions())
    if (const auto* d = std::get_if<DecJz>(&ins)) targets.insert(d->target);

  std::ostringstream out;
  if (MachineProgram::with_inferred_registers(program.instructions()).register_count() != program.register_count())
    out << "registers " << program.register_count() << '\n';
  for (std::size_t i = 0; i < program.size(); ++i) {
    std::string label = targets.contains(static_cast<InstructionIndex>(i)) ? "L" + std::to_string(i) + ":" : "";
    out << label << std::string(label.size() < 8 ? 8 - label.size() : 1, ' ');
    std::visit(Overloaded{[&](const Inc& x) { out << "inc " << x.reg; },
                          [&](const DecJz& x) { out << "decjz " << x.reg << " L" << x.target; },
                          [&](const Halt&) { out << "halt"; }},
               program.instructions()[i]);
    out << '\n';
  }
  return out.str();
}

MachineState initial_state(const MachineProgram& program, const Natural& input) {
  MachineState state;
  state.registers.assign(program.register_count(), Natural(0));
  state.registers[0] = input;
  return state;
}

void step_in_place(const MachineProgram& program, MachineState& state) {
  if (state.halted(program)) throw std::logic_error("step() on a halted machine state");
  const Instruction& ins = program.instructions()[state.pc];
  if (const auto* inc = std::get_if<Inc>(&ins)) {
    ++state.registers[inc->reg];
    ++state.pc;
  } else if (const auto* dec = std::get_if<DecJz>(&ins)) {
    Natural& reg = state.registers[dec->reg];
    if (sgn(reg) > 0) {
      --reg;
      ++state.pc;
    } else {
      state.pc = dec->target;
    }
  } else {
    state.pc = program.size();
  }
  ++state.steps_executed;
}

MachineState step(const MachineProgram& program, MachineState state) {
  step_in_place(program, state);
  return state;
}

Execution::Execution(MachineProgram program, const Natural& input)
    : program_(std::move(program)), state_(initial_state(program_, input)) {}

void Execution::run_until(StepCount limit) {
  while (state_.steps_executed < limit && !state_.halted(program_)) step_in_place(program_, state_);
}

ExecutionOutcome run_bounded(const MachineProgram& program, const Natural& input, StepCount budget) {
  MachineState state = initial_state(program, input);
  while (state.steps_executed < budget && !state.halted(program)) step_in_place(program, state);
  if (state.halted(program)) return HaltedAt{state.steps_executed};
  return RunningAfter{budget};
}

bool halted_by(const MachineProgram& program, const Natural& input, StepCount n) {
  return std::holds_alternative<HaltedAt>(run_bounded(program, input, n));
}

std::string to_string(const ExecutionOutcome& outcome) {
  if (const auto* h = std::get_if<HaltedAt>(&outcome)) return "HALTED at step " + std::to_string(h->steps);
  return "RUNNING after " + std::to_string(std::get<RunningAfter>(outcome).budget);
}

}  // namespace hs
