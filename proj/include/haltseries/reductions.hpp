#pragma once

#include "haltseries/coefficients.hpp"
#include "haltseries/machine.hpp"
#include "haltseries/series.hpp"

#include <cstdint>
#include <optional>
#include <stop_token>
#include <string>
#include <variant>
#include <vector>

namespace hs {

/// (program, input) -> power series with a_n = n! iff the run halted by step n.
struct ForwardReduction {
  MachineProgram program;
  Natural input;
  CoefficientStream stream;
};

/// Pure construction; no simulation is performed until coefficients are read.
ForwardReduction forward_reduce(const MachineProgram& program, const Natural& input);

/// Threshold the halting semidecision hands to the ratio test.
inline const Rational kHaltingRatioThreshold{2};

/// Ratio test on the forward-reduced stream. A WitnessedDivergence certificate
/// implies a_n != 0 for some n <= budget, i.e. the run halted within budget
/// steps. Requires r > 0 and budget >= 1.
SeriesProbeReport semidecide_halting_via_series(const MachineProgram& program, const Natural& input,
                                                const EvaluationPoint& point, std::uint64_t budget);

enum class DetectorKind {
  QThreshold,  // halt at the first N with |S_N(1)| > N
  PSCauchy,    // halt at the first k with no Cauchy window [N, k] of width < 2^-k
};

/// Knobs for the Cauchy detector. The defaults are the literal construction;
/// anything else is a heuristic with no correctness claim.
struct CauchyWindowOptions {
  /// Partial sums examined per round: S_1 .. S_{horizon_factor * k}.
  std::uint64_t horizon_factor = 1;
  /// Restrict the candidate N to N <= k/2 instead of N <= k.
  bool half_window = false;
  /// Fixed tolerance instead of 2^-k.
  std::optional<Rational> fixed_tolerance;

  bool literal() const { return horizon_factor == 1 && !half_window && !fixed_tolerance; }
  friend bool operator==(const CauchyWindowOptions&, const CauchyWindowOptions&) = default;
};

/// A divergence detector over a coefficient stream, evaluated at z = 1.
struct DetectorProgram {
  DetectorKind kind;
  CoefficientStream source_stream;
  CauchyWindowOptions options;  // PSCauchy only
};

DetectorProgram build_detector_q(const CoefficientStream& stream);
DetectorProgram build_detector_ps(const CoefficientStream& stream, CauchyWindowOptions options = {});

/// Pseudocode listing of what run_detector executes.
std::string describe_detector(const DetectorProgram& detector);

/// |S_N(1)| > N.
struct ThresholdCertificate {
  std::uint64_t n;
  Rational partial_sum;
};

/// Every candidate N in [1, n_limit] fails because the window [N, horizon]
/// contains indices m, n >= n_limit with |S_m(1) - S_n(1)| >= tolerance.
struct CauchyCertificate {
  std::uint64_t k;
  std::uint64_t horizon;
  std::uint64_t n_limit;
  Rational tolerance;
  std::uint64_t m_index;
  std::uint64_t n_index;
  Rational s_m;
  Rational s_n;
};

using DetectorCertificate = std::variant<ThresholdCertificate, CauchyCertificate>;

struct DetectorHalted {
  std::uint64_t iteration;
  DetectorCertificate certificate;
};

struct DetectorStillRunning {
  std::uint64_t budget;
};

/// Certified enclosure lower <= S_N(1) <= upper of the last partial sum
/// examined. Exact when lower == upper.
struct SumEnclosure {
  std::uint64_t n;
  Rational lower;
  Rational upper;
};

/// The window start N accepted in round k: the largest N <= limit for which
/// [N, horizon] passes. For the literal construction this is always N = k.
struct WindowWitness {
  std::uint64_t k;
  std::uint64_t n;
};

struct DetectorOutcome {
  std::variant<DetectorHalted, DetectorStillRunning> result;
  std::vector<TracePoint> trace;  // exact (N, S_N(1)) for the first rounds
  std::optional<SumEnclosure> last;
  std::vector<WindowWitness> windows;  // PSCauchy only, one per completed round
  bool cancelled = false;

  bool halted() const { return std::holds_alternative<DetectorHalted>(result); }
};

inline constexpr std::size_t kDetectorTracePoints = 20;

/// Runs at most `budget` outer iterations (N for Q, k for P_S). Stops early,
/// reporting StillRunning with the iterations completed, once `stop` is
/// requested. Requires budget >= 1.
DetectorOutcome run_detector(const DetectorProgram& detector, std::uint64_t budget,
                             std::stop_token stop = {});

/// Recomputes the cited partial sums from scratch and re-checks the inequality.
bool recheck_certificate(const DetectorProgram& detector, const DetectorCertificate& certificate);

}  // namespace hs
