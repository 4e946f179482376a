#pragma once

#include "haltseries/machine.hpp"

#include <random>

namespace hs {

struct ProgramShape {
  std::size_t max_length = 8;
  RegisterIndex max_registers = 3;
};

/// Uniformly shaped random valid program: length in [1, max_length], register
/// count in [1, max_registers], opcode weights inc:decjz:halt = 2:2:1.
MachineProgram random_program(std::mt19937_64& rng, const ProgramShape& shape = {});

}  // namespace hs
