#pragma once

#include "haltseries/coefficients.hpp"
#include "haltseries/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hs {

/// The modulus |z| at which a series is probed.
class EvaluationPoint {
 public:
  /// Throws std::invalid_argument if r < 0.
  explicit EvaluationPoint(Rational r);

  const Rational& r() const noexcept { return r_; }

 private:
  Rational r_;
};

/// A caller-supplied convergence rate N(m, r). Rates are only ever falsified,
/// never trusted.
class RateFunction {
 public:
  struct Entry {
    unsigned m;
    std::optional<Rational> r_upper;  // nullopt: valid for every r
    Index terms;
  };

  /// Smallest N with 2 r^(N+1) / (N+1)! < 2^-m. Declared for 0 <= r <= 1,
  /// where it bounds the tail of sum r^n / n!.
  static RateFunction exp_tail();
  static RateFunction constant(Index terms);
  /// N(m, r) = slope * m + offset.
  static RateFunction linear(Index slope, Index offset);
  /// N(m, r) = min{N : (m', R', N) in table, m' >= m, R' >= r}. Throws
  /// std::invalid_argument if N decreases in m for a fixed R'.
  static RateFunction tabulated(std::vector<Entry> entries);

  /// Throws RateUndefined outside the declared domain.
  Index operator()(unsigned m, const Rational& r) const;
  bool defined_at(unsigned m, const Rational& r) const;

  std::string describe() const;

 private:
  enum class Form { ExpTail, Constant, Linear, Table };

  RateFunction(Form form, Index a, Index b, std::vector<Entry> table);
  std::optional<Index> evaluate(unsigned m, const Rational& r) const;

  Form form_;
  Index a_ = 0;
  Index b_ = 0;
  std::vector<Entry> table_;
};

struct WitnessedDivergence {
  Index index;
  friend bool operator==(const WitnessedDivergence&, const WitnessedDivergence&) = default;
};

struct WitnessedBoundViolation {
  std::string detail;
  friend bool operator==(const WitnessedBoundViolation&, const WitnessedBoundViolation&) = default;
};

struct ConsistentUpToBudget {
  std::uint64_t budget;
  friend bool operator==(const ConsistentUpToBudget&, const ConsistentUpToBudget&) = default;
};

/// Budgeted three-valued outcome. There is deliberately no "converges".
using Verdict = std::variant<WitnessedDivergence, WitnessedBoundViolation, ConsistentUpToBudget>;

bool is_witness(const Verdict& verdict);
std::string verdict_name(const Verdict& verdict);

enum class ProbeKind { RatioTest, EffectiveCriterion, Modulus };

std::string probe_kind_name(ProbeKind kind);

/// Finite certificate. `values` carries every exact quantity needed to re-check
/// the violated inequality from scratch (see recheck_witness).
struct Witness {
  Index index = 0;
  Rational value;
  std::vector<std::pair<std::string, Rational>> values;

  const Rational& get(std::string_view name) const;
};

struct TracePoint {
  Index n;
  Rational partial_sum;
};

struct SeriesProbeReport {
  ProbeKind kind = ProbeKind::RatioTest;
  Verdict verdict = ConsistentUpToBudget{0};
  std::optional<Witness> witness;
  std::vector<TracePoint> trace;
  std::uint64_t budget_used = 0;
};

/// Exact sum_{n=0}^{N} a_n r^n.
Rational partial_sum(const CoefficientStream& stream, const EvaluationPoint& point, Index terms);

/// Exact partial sums S_0..S_last.
std::vector<Rational> partial_sums(const CoefficientStream& stream, const EvaluationPoint& point, Index last);

struct EffectiveSum {
  Rational value;
  Index terms_used;
};

/// Sums up to N = rate(m, r). Within 2^-m of the limit only if the rate is
/// honest; check_modulus is the falsifier. Throws RateUndefined.
EffectiveSum effective_partial_sum(const CoefficientStream& stream, const EvaluationPoint& point,
                                   unsigned m, const RateFunction& rate);

/// Scans adjacent nonzero pairs (a_n, a_{n+1}) for n + 1 <= budget. Divergence
/// is witnessed at the first n from which |a_{n+1}| r / |a_n| >= threshold
/// holds for every later sampled pair. Requires threshold > 1, budget >= 1.
SeriesProbeReport ratio_test_probe(const CoefficientStream& stream, const EvaluationPoint& point,
                                   const Rational& threshold, std::uint64_t budget);

/// Documented relative precision of root estimates.
inline constexpr double kRootEstimateRelativeError = 1e-9;

struct RootEstimate {
  Index n;
  double estimate;      // |a_n|^(1/n), 0 for a zero coefficient
  double trailing_max;  // max estimate over indices in [ceil(n/2), n]
};

struct RootEstimateReport {
  std::vector<RootEstimate> entries;  // n = 1..n_max
  double limsup_proxy = 0.0;          // trailing max at n_max; a diagnostic only
  std::optional<double> implied_radius() const;  // nullopt: infinite
};

RootEstimateReport root_estimate(const CoefficientStream& stream, Index n_max);

/// Falsifies "for all n >= M(k): |a_n|^(1/n) < 1/R + 2^-k" for k = 0..k_max and
/// n in [max(M(k), 1), n_budget]. Borderline estimates are settled exactly via
/// |a_n| >= (1/R + 2^-k)^n, so every reported violation is exact.
SeriesProbeReport check_effective_criterion(const CoefficientStream& stream, const RateFunction& m_rate,
                                            const Rational& radius, unsigned k_max, Index n_budget);

/// For n = 0..n_max, checks |S_k - limit| < 2^-n at k = e(n) and sampled k > e(n)
/// (see modulus_samples). The rate is queried as e(n) = rate(n, r).
SeriesProbeReport check_modulus(const CoefficientStream& stream, const EvaluationPoint& point,
                                const Rational& claimed_limit, const RateFunction& rate, unsigned n_max);

/// k = e, e+1, e+2, e+4, ..., e+64 and 2e+1, ascending, deduplicated.
std::vector<Index> modulus_samples(Index e);

/// Re-derives a report's certificate from scratch with coefficient_at and
/// exact arithmetic. False if there is no witness or it does not hold.
bool recheck_witness(const CoefficientStream& stream, const SeriesProbeReport& report);

}  // namespace hs
