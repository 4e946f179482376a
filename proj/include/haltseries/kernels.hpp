#pragma once

// Data-parallel kernels behind the series and batch APIs. Each kernel in
// hs::kernels is an OpenMP loop; hs::reference holds the serial loop with the
// identical contract. Tests require the two to agree exactly.

#include "haltseries/coefficients.hpp"
#include "haltseries/machine.hpp"
#include "haltseries/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hs {

/// One k of the effective-criterion check: n ranges over [first_n, last_n].
struct CriterionRow {
  unsigned k;
  Index first_n;
  Rational bound;  // 1/R + 2^-k
};

struct CriterionHit {
  std::size_t row;
  Index n;
  friend bool operator==(const CriterionHit&, const CriterionHit&) = default;
};

/// One precision level of the modulus check: |S_k - L| < 2^-n for k in samples.
struct ModulusRow {
  unsigned n;
  std::vector<Index> samples;
};

struct ModulusHit {
  std::size_t row;
  Index k;
  friend bool operator==(const ModulusHit&, const ModulusHit&) = default;
};

/// log|q| in double precision; -inf for zero.
double log_magnitude(const Rational& value);

/// Whether |a_n|^(1/n) >= bound, given a root estimate of a_n. Uses the
/// estimate when it is clear of the bound by the documented precision, else
/// decides exactly via |a_n| >= bound^n.
bool root_at_least(const Rational& coefficient, Index n, double estimate, const Rational& bound);

namespace kernels {

std::vector<ExecutionOutcome> run_batch(std::span<const MachineProgram> programs, const Natural& input,
                                        StepCount budget);

/// out[n] = |a_n|^(1/n) for n >= 1; out[0] = 0.
std::vector<double> root_estimates(std::span<const Rational> coefficients);

/// First (row, n) in row-major order with |a_n|^(1/n) >= bound, n <= last_n.
std::optional<CriterionHit> first_criterion_violation(std::span<const Rational> coefficients,
                                                      std::span<const double> estimates,
                                                      std::span<const CriterionRow> rows, Index last_n);

/// First (row, k) in row-major order with |S_k - limit| >= 2^-n.
std::optional<ModulusHit> first_modulus_violation(std::span<const Rational> partial_sums,
                                                  const Rational& limit,
                                                  std::span<const ModulusRow> rows);

}  // namespace kernels

namespace reference {

std::vector<ExecutionOutcome> run_batch(std::span<const MachineProgram> programs, const Natural& input,
                                        StepCount budget);

/// out[n] = |a_n|^(1/n) for n >= 1; out[0] = 0.
std::vector<double> root_estimates(std::span<const Rational> coefficients);

/// First (row, n) in row-major order with |a_n|^(1/n) >= bound, n <= last_n.
std::optional<CriterionHit> first_criterion_violation(std::span<const Rational> coefficients,
                                                      std::span<const double> estimates,
                                                      std::span<const CriterionRow> rows, Index last_n);

/// First (row, k) in row-major order with |S_k - limit| >= 2^-n.
std::optional<ModulusHit> first_modulus_violation(std::span<const Rational> partial_sums,
                                                  const Rational& limit,
                                                  std::span<const ModulusRow> rows);

}  // namespace reference

}  // namespace hs
