#include "haltseries/reductions.hpp"

#include <sstream>
#include <stdexcept>

namespace hs {
namespace {

/// Fixed-point enclosure of a running sum: lower / 2^P <= S <= upper / 2^P.
/// Each added term widens the interval by less than 2^-P.
class SumEnclosureAccumulator {
 public:
  static constexpr mp_bitcnt_t kFractionBits = 64;

  void add(const Rational& term) {
    if (term == 0) return;
    scaled_ = term.get_num();
    mpz_mul_2exp(scaled_.get_mpz_t(), scaled_.get_mpz_t(), kFractionBits);
    mpz_fdiv_q(floor_.get_mpz_t(), scaled_.get_mpz_t(), term.get_den_mpz_t());
    mpz_cdiv_q(ceil_.get_mpz_t(), scaled_.get_mpz_t(), term.get_den_mpz_t());
    lower_ += floor_;
    upper_ += ceil_;
  }

  /// +1 if |S| > bound for certain, -1 if |S| <= bound for certain, 0 if undecided.
  int compare_magnitude(std::uint64_t bound) const {
    Natural b(static_cast<unsigned long>(bound));
    mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), kFractionBits);
    if (lower_ > b || upper_ < -b) return 1;
    if (upper_ <= b && lower_ >= -b) return -1;
    return 0;
  }

  Rational lower() const { return scaled_back(lower_); }
  Rational upper() const { return scaled_back(upper_); }

 private:
  static Rational scaled_back(const Natural& v) {
    Rational out(v);
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), kFractionBits);
    return out;
  }

  Natural lower_ = 0, upper_ = 0;
  Natural scaled_, floor_, ceil_;
};

Rational partial_sum_at_one(const CoefficientStream& stream, std::uint64_t n) {
  return partial_sum(stream, EvaluationPoint(Rational(1)), n);
}

Rational cauchy_tolerance(const CauchyWindowOptions& options, std::uint64_t k) {
  return options.fixed_tolerance ? *options.fixed_tolerance : inverse_power_of_two(static_cast<unsigned long>(k));
}

std::uint64_t cauchy_limit(const CauchyWindowOptions& options, std::uint64_t k) {
  return options.half_window ? std::max<std::uint64_t>(1, k / 2) : k;
}

DetectorOutcome run_threshold(const CoefficientStream& stream, std::uint64_t budget, std::stop_token stop) {
  DetectorOutcome out;
  auto cursor = stream.cursor();
  SumEnclosureAccumulator enclosure;
  Rational exact = cursor.next();
  enclosure.add(exact);

  std::uint64_t n = 1;
  for (; n <= budget; ++n) {
    if (stop.stop_requested()) {
      out.cancelled = true;
      break;
    }
    const Rational term = cursor.next();
    enclosure.add(term);
    if (n <= kDetectorTracePoints) {
      exact += term;
      out.trace.push_back({n, exact});
    }

    int verdict = enclosure.compare_magnitude(n);
    std::optional<Rational> sum;
    if (verdict >= 0) {
      sum = n <= kDetectorTracePoints ? exact : partial_sum_at_one(stream, n);
      if (verdict == 0) verdict = abs(*sum) > n ? 1 : -1;
    }
    if (verdict > 0) {
      out.last = SumEnclosure{n, *sum, *sum};
      out.result = DetectorHalted{n, ThresholdCertificate{n, *sum}};
      return out;
    }
  }
  const std::uint64_t done = n - 1;
  out.result = DetectorStillRunning{done};
  if (done >= 1) out.last = SumEnclosure{done, enclosure.lower(), enclosure.upper()};
  return out;
}

DetectorOutcome run_cauchy(const CoefficientStream& stream, const CauchyWindowOptions& options, std::uint64_t budget,
                           std::stop_token stop) {
  DetectorOutcome out;
  auto cursor = stream.cursor();
  std::vector<Rational> sums{cursor.next()};  // sums[m] = S_m(1)
  Rational diff;

  std::uint64_t k = 1;
  for (; k <= budget; ++k) {
    if (stop.stop_requested()) {
      out.cancelled = true;
      break;
    }
    const std::uint64_t horizon = options.horizon_factor * k;
    while (sums.size() <= horizon) {
      sums.push_back(sums.back() + cursor.next());
      const std::uint64_t m = sums.size() - 1;
      if (m <= kDetectorTracePoints) out.trace.push_back({m, sums.back()});
    }
    const Rational tolerance = cauchy_tolerance(options, k);
    const std::uint64_t n_limit = cauchy_limit(options, k);

    // Valid window starts form a suffix of [1, horizon]: scan down from the
    // horizon until a start <= n_limit is accepted or the window breaks.
    std::uint64_t arg_max = horizon, arg_min = horizon;
    std::uint64_t accepted = horizon + 1;
    for (std::uint64_t start = horizon; start >= 1; --start) {
      if (sums[start] > sums[arg_max]) arg_max = start;
      if (sums[start] < sums[arg_min]) arg_min = start;
      diff = sums[arg_max] - sums[arg_min];
      if (diff >= tolerance) break;
      accepted = start;
      if (start <= n_limit) break;
    }

    if (accepted <= n_limit) {
      out.windows.push_back({k, accepted});
      continue;
    }
    CauchyCertificate cert{k, horizon, n_limit, tolerance, arg_max, arg_min, sums[arg_max], sums[arg_min]};
    out.last = SumEnclosure{horizon, sums[horizon], sums[horizon]};
    out.result = DetectorHalted{k, std::move(cert)};
    return out;
  }
  const std::uint64_t done = k - 1;
  out.result = DetectorStillRunning{done};
  if (done >= 1) {
    const std::uint64_t h = options.horizon_factor * done;
    out.last = SumEnclosure{h, sums[h], sums[h]};
  }
  return out;
}

}  // namespace

ForwardReduction forward_reduce(const MachineProgram& program, const Natural& input) {
  return {program, input, halting_coefficients(program, input)};
}

SeriesProbeReport semidecide_halting_via_series(const MachineProgram& program, const Natural& input,
                                                const EvaluationPoint& point, std::uint64_t budget) {
  if (sgn(point.r()) <= 0) throw std::invalid_argument("halting semidecision needs r > 0");
  return ratio_test_probe(forward_reduce(program, input).stream, point, kHaltingRatioThreshold, budget);
}

DetectorProgram build_detector_q(const CoefficientStream& stream) {
  return {DetectorKind::QThreshold, stream, {}};
}

DetectorProgram build_detector_ps(const CoefficientStream& stream, CauchyWindowOptions options) {
  if (options.horizon_factor < 1) throw std::invalid_argument("horizon factor must be at least 1");
  if (options.fixed_tolerance && sgn(*options.fixed_tolerance) <= 0)
    throw std::invalid_argument("tolerance must be positive");
  return {DetectorKind::PSCauchy, stream, std::move(options)};
}

std::string describe_detector(const DetectorProgram& detector) {
  std::ostringstream out;
  out << "# source: " << detector.source_stream.describe() << "\n";
  if (detector.kind == DetectorKind::QThreshold) {
    out << "for N = 1, 2, 3, ...:\n"
           "  S := a_0 + a_1 + ... + a_N\n"
           "  if |S| > N: halt(\"divergent\")\n";
    return out.str();
  }
  const auto& o = detector.options;
  if (!o.literal()) out << "# HEURISTIC variant: no correctness claim\n";
  const std::string horizon = o.horizon_factor == 1 ? "k" : std::to_string(o.horizon_factor) + "k";
  out << "for k = 1, 2, 3, ...:\n"
      << "  compute S_1 .. S_" << horizon << "\n"
      << "  if no N <= " << (o.half_window ? "max(1, k/2)" : "k") << " has |S_m - S_n| < "
      << (o.fixed_tolerance ? to_string(*o.fixed_tolerance) : std::string("2^-k")) << " for all m, n in [N, "
      << horizon << "]:\n"
      << "    halt(\"divergent\")\n";
  return out.str();
}

DetectorOutcome run_detector(const DetectorProgram& detector, std::uint64_t budget, std::stop_token stop) {
  if (budget < 1) throw std::invalid_argument("detector budget must be at least 1");
  if (detector.kind == DetectorKind::QThreshold) return run_threshold(detector.source_stream, budget, stop);
  return run_cauchy(detector.source_stream, detector.options, budget, stop);
}

bool recheck_certificate(const DetectorProgram& detector, const DetectorCertificate& certificate) {
  if (const auto* t = std::get_if<ThresholdCertificate>(&certificate)) {
    if (detector.kind != DetectorKind::QThreshold) return false;
    const Rational s = partial_sum_at_one(detector.source_stream, t->n);
    return s == t->partial_sum && abs(s) > t->n;
  }
  const auto& c = std::get<CauchyCertificate>(certificate);
  if (detector.kind != DetectorKind::PSCauchy) return false;
  const auto& o = detector.options;
  if (c.horizon != o.horizon_factor * c.k || c.n_limit != cauchy_limit(o, c.k) ||
      c.tolerance != cauchy_tolerance(o, c.k))
    return false;
  if (c.m_index < c.n_limit || c.n_index < c.n_limit || c.m_index > c.horizon || c.n_index > c.horizon) return false;
  const Rational s_m = partial_sum_at_one(detector.source_stream, c.m_index);
  const Rational s_n = partial_sum_at_one(detector.source_stream, c.n_index);
  return s_m == c.s_m && s_n == c.s_n && abs(s_m - s_n) >= c.tolerance;
}

}  // namespace hs
