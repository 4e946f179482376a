#include "haltseries/kernels.hpp"

#include "haltseries/series.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

namespace hs {
namespace {

constexpr Index kNoHit = std::numeric_limits<Index>::max();

double root_of(const Rational& coefficient, Index n) {
  if (coefficient == 0 || n == 0) return 0.0;
  return std::exp(log_magnitude(coefficient) / static_cast<double>(n));
}

Index first_hit_in_row(std::span<const Rational> coefficients, std::span<const double> estimates,
                       const CriterionRow& row, Index last_n) {
  for (Index n = std::max<Index>(row.first_n, 1); n <= last_n; ++n)
    if (root_at_least(coefficients[n], n, estimates[n], row.bound)) return n;
  return kNoHit;
}

Index first_hit_in_row(std::span<const Rational> partial_sums, const Rational& limit, const ModulusRow& row) {
  const Rational tolerance = inverse_power_of_two(row.n);
  Rational error;
  for (Index k : row.samples) {
    error = partial_sums[k] - limit;
    if (abs(error) >= tolerance) return k;
  }
  return kNoHit;
}

/// Rethrows the first exception raised inside an OpenMP region.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(hs_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

double log_magnitude(const Rational& value) {
  if (value == 0) return -std::numeric_limits<double>::infinity();
  long num_exp = 0;
  long den_exp = 0;
  double num = std::fabs(mpz_get_d_2exp(&num_exp, value.get_num_mpz_t()));
  double den = mpz_get_d_2exp(&den_exp, value.get_den_mpz_t());
  return std::log(num) - std::log(den) + static_cast<double>(num_exp - den_exp) * std::numbers::ln2;
}

bool root_at_least(const Rational& coefficient, Index n, double estimate, const Rational& bound) {
  if (coefficient == 0) return sgn(bound) <= 0;
  const double b = bound.get_d();
  if (estimate > b * (1 + kRootEstimateRelativeError)) return true;
  if (estimate < b * (1 - kRootEstimateRelativeError)) return false;
  return abs(coefficient) >= pow(bound, static_cast<unsigned long>(n));
}

namespace reference {

std::vector<ExecutionOutcome> run_batch(std::span<const MachineProgram> programs, const Natural& input,
                                        StepCount budget) {
  std::vector<ExecutionOutcome> out;
  out.reserve(programs.size());
  for (const auto& p : programs) out.push_back(run_bounded(p, input, budget));
  return out;
}

std::vector<double> root_estimates(std::span<const Rational> coefficients) {
  std::vector<double> out(coefficients.size(), 0.0);
  for (std::size_t n = 1; n < coefficients.size(); ++n) out[n] = root_of(coefficients[n], n);
  return out;
}

std::optional<CriterionHit> first_criterion_violation(std::span<const Rational> coefficients,
                                                      std::span<const double> estimates,
                                                      std::span<const CriterionRow> rows, Index last_n) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (Index n = first_hit_in_row(coefficients, estimates, rows[i], last_n); n != kNoHit) return CriterionHit{i, n};
  return std::nullopt;
}

std::optional<ModulusHit> first_modulus_violation(std::span<const Rational> partial_sums, const Rational& limit,
                                                  std::span<const ModulusRow> rows) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (Index k = first_hit_in_row(partial_sums, limit, rows[i]); k != kNoHit) return ModulusHit{i, k};
  return std::nullopt;
}

}  // namespace reference

namespace kernels {

std::vector<ExecutionOutcome> run_batch(std::span<const MachineProgram> programs, const Natural& input,
                                        StepCount budget) {
  std::vector<ExecutionOutcome> out(programs.size(), RunningAfter{0});
  const auto count = static_cast<std::int64_t>(programs.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i)
    slot.run([&] { out[i] = run_bounded(programs[i], input, budget); });
  slot.rethrow();
  return out;
}

std::vector<double> root_estimates(std::span<const Rational> coefficients) {
  std::vector<double> out(coefficients.size(), 0.0);
  const auto count = static_cast<std::int64_t>(coefficients.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t n = 1; n < count; ++n) out[n] = root_of(coefficients[n], static_cast<Index>(n));
  return out;
}

std::optional<CriterionHit> first_criterion_violation(std::span<const Rational> coefficients,
                                                      std::span<const double> estimates,
                                                      std::span<const CriterionRow> rows, Index last_n) {
  std::vector<Index> hits(rows.size(), kNoHit);
  const auto count = static_cast<std::int64_t>(rows.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i)
    slot.run([&] { hits[i] = first_hit_in_row(coefficients, estimates, rows[i], last_n); });
  slot.rethrow();
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (hits[i] != kNoHit) return CriterionHit{i, hits[i]};
  return std::nullopt;
}

std::optional<ModulusHit> first_modulus_violation(std::span<const Rational> partial_sums, const Rational& limit,
                                                  std::span<const ModulusRow> rows) {
  std::vector<Index> hits(rows.size(), kNoHit);
  const auto count = static_cast<std::int64_t>(rows.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i)
    slot.run([&] { hits[i] = first_hit_in_row(partial_sums, limit, rows[i]); });
  slot.rethrow();
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (hits[i] != kNoHit) return ModulusHit{i, hits[i]};
  return std::nullopt;
}

}  // namespace kernels
}  // namespace hs
