#pragma once

#include "haltseries/coefficients.hpp"
#include "haltseries/series.hpp"

#include <filesystem>
#include <string_view>

namespace hs {

/// Series spec text, `#` comments allowed:
///   builtin <name> [params...]
///   halting <program-file> <input>       (path relative to base_dir)
///   explicit a0 a1 ... | tail c
/// Throws ParseError.
CoefficientStream parse_series_spec(std::string_view text, const std::filesystem::path& base_dir = {});

CoefficientStream load_series_spec(const std::filesystem::path& file);
MachineProgram load_program(const std::filesystem::path& file);

/// Rate spec: `exptail`, `const:N`, `linear:A:B`, or `table:M:R:N[,M:R:N...]`
/// with R a rational or `*` for any r. Throws ParseError.
RateFunction parse_rate(std::string_view text);

}  // namespace hs
