#pragma once

#include "haltseries/machine.hpp"
#include "haltseries/reductions.hpp"
#include "haltseries/series.hpp"

#include <string>

namespace hs {

/// Line-oriented human report. Long rationals are abbreviated; every number is
/// followed by an `approx` decimal.
std::string format_probe_text(const SeriesProbeReport& report);

/// `key=value` lines, exact rationals as p/q, fixed key order:
///   kind, verdict, witness.index, witness.value, witness.<name>..., budget,
///   budget_used, trace.count, trace.<i>=<n>:<S_n>
std::string format_probe_kv(const SeriesProbeReport& report);

std::string format_root_estimates(const RootEstimateReport& report, std::size_t max_rows = 20);

/// Verdict line, certificate block with exact rationals, first 20 trace points.
std::string format_detector(const DetectorProgram& detector, const DetectorOutcome& outcome);

}  // namespace hs
