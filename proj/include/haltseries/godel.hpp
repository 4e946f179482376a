#pragma once

#include "haltseries/machine.hpp"
#include "haltseries/rational.hpp"

#include <cstdint>

namespace hs {

/// Cantor pairing <a, b> = (a + b)(a + b + 1)/2 + b, a bijection N x N -> N.
Natural cantor_pair(const Natural& a, const Natural& b);
std::pair<Natural, Natural> cantor_unpair(const Natural& z);

/// Bijection Instruction -> N:
///   halt -> 0, inc r -> 2r + 1, decjz r L -> 2<r, L> + 2.
Natural instruction_code(const Instruction& instruction);
Instruction instruction_from_code(const Natural& code);

/// Gödel number of a program. Binary layout, most significant bit first:
///   1 . gamma(register_count) . gamma(length) . gamma(c_0 + 1) ... gamma(c_{k-1} + 1)
/// where gamma is the Elias gamma code and c_i the instruction codes.
Natural encode_godel(const MachineProgram& program);

/// Inverse of encode_godel. Throws InvalidEncoding with the bit offset of a
/// structural defect, or the instruction index of a semantic one.
MachineProgram decode_godel(const Natural& code);

}  // namespace hs
