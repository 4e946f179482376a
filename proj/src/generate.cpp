#include "haltseries/generate.hpp"

namespace hs {

MachineProgram random_program(std::mt19937_64& rng, const ProgramShape& shape) {
  using Dist = std::uniform_int_distribution<std::uint64_t>;
  const auto length = static_cast<std::size_t>(Dist(1, shape.max_length)(rng));
  const auto registers = static_cast<RegisterIndex>(Dist(1, shape.max_registers)(rng));
  Dist reg(0, registers - 1);
  Dist target(0, length - 1);
  Dist opcode(0, 4);

  std::vector<Instruction> instructions;
  instructions.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    const auto op = opcode(rng);
    if (op < 2)
      instructions.emplace_back(Inc{static_cast<RegisterIndex>(reg(rng))});
    else if (op < 4)
      instructions.emplace_back(DecJz{static_cast<RegisterIndex>(reg(rng)), static_cast<InstructionIndex>(target(rng))});
    else
      instructions.emplace_back(Halt{});
  }
  return MachineProgram(std::move(instructions), registers);
}

}  // namespace hs
