#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hs::cli {

inline constexpr int kExitWitness = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitBudgetExhausted = 2;

/// Entry point of `haltseries`. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hs::cli
