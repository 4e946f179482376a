#include "haltseries/errors.hpp"
#include "haltseries/series.hpp"

#include "corpus.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hs;

namespace {

CoefficientStream builtin(const char* name, std::vector<Rational> params = {}) { return builtin_stream(name, params); }

EvaluationPoint at(long p, long q = 1) { return EvaluationPoint(Rational(p, q)); }

/// Oracle for the exp-tail rate: direct search with slow factorials.
Index exp_tail_oracle(unsigned m, const Rational& r) {
  for (unsigned long n = 0;; ++n) {
    Rational bound = 2 * pow(r, n + 1) / Rational(testing::slow_factorial(n + 1));
    if (bound < inverse_power_of_two(m)) return n;
  }
}

/// Oracle sum with the explicit formula a_n r^n, no cursor.
Rational direct_sum(const CoefficientStream& s, const Rational& r, Index last) {
  Rational total = 0;
  for (Index n = 0; n <= last; ++n) total += s.at(n) * pow(r, static_cast<unsigned long>(n));
  return total;
}

}  // namespace

TEST_CASE("EvaluationPoint rejects negative moduli") {
  CHECK_THROWS_AS(EvaluationPoint(Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("partial_sum examples") {
  CHECK(partial_sum(builtin("one"), at(1, 2), 3) == Rational(15, 8));
  CHECK(partial_sum(builtin("zero"), at(7, 3), 40) == 0);
  CHECK(partial_sum(builtin("factorial-tail", {2}), at(1), 4) == 32);
}

TEST_CASE("property: partial-sum recurrence and agreement with the direct formula") {
  std::mt19937_64 rng(5);
  std::vector<CoefficientStream> streams{builtin("harmonic"), builtin("alternating"), builtin("reciprocal-factorial"),
                                         builtin("geometric", {Rational(3, 4)}), builtin("factorial-tail", {3}),
                                         halting_coefficients(testing::load_corpus()[3].program, 0)};
  std::uniform_int_distribution<long> num(0, 9), den(1, 9);
  std::uniform_int_distribution<Index> idx(1, 60);
  for (int trial = 0; trial < 60; ++trial) {
    const auto& s = streams[static_cast<std::size_t>(trial) % streams.size()];
    Rational r(num(rng), den(rng));
    r.canonicalize();
    const Index n = idx(rng);
    const EvaluationPoint p(r);
    CHECK(partial_sum(s, p, n) == partial_sum(s, p, n - 1) + s.at(n) * pow(r, static_cast<unsigned long>(n)));
    CHECK(partial_sum(s, p, n) == direct_sum(s, r, n));
    CHECK(partial_sums(s, p, n).back() == partial_sum(s, p, n));
  }
}

TEST_CASE("exp-tail rate matches the brute-force oracle") {
  for (const Rational& r : {Rational(0), Rational(1, 2), Rational(1), Rational(1, 7)})
    for (unsigned m = 0; m <= 30; ++m) CHECK(RateFunction::exp_tail()(m, r) == exp_tail_oracle(m, r));
  CHECK(RateFunction::exp_tail()(20, Rational(1)) == 9);
  CHECK_THROWS_AS(RateFunction::exp_tail()(3, Rational(3, 2)), RateUndefined);
}

TEST_CASE("tabulated rates") {
  auto rate = RateFunction::tabulated({{4, Rational(1), 10}, {8, Rational(1), 20}, {8, std::nullopt, 40}});
  CHECK(rate(2, Rational(1, 2)) == 10);
  CHECK(rate(5, Rational(1)) == 20);
  CHECK(rate(5, Rational(3)) == 40);
  CHECK_FALSE(rate.defined_at(9, Rational(0)));
  CHECK_THROWS_AS(rate(9, Rational(0)), RateUndefined);
  CHECK_THROWS_AS(RateFunction::tabulated({{1, Rational(1), 10}, {2, Rational(1), 5}}), std::invalid_argument);
  CHECK(RateFunction::linear(2, 3)(5, Rational(100)) == 13);
}

TEST_CASE("effective_partial_sum: e within 2^-10 and e^(1/2) within 2^-20") {
  const auto s = builtin("reciprocal-factorial");
  const auto rate = RateFunction::exp_tail();
  for (auto [r, m] : {std::pair{Rational(1), 10u}, std::pair{Rational(1, 2), 20u}}) {
    const EvaluationPoint p(r);
    const auto result = effective_partial_sum(s, p, m, rate);
    const Rational oracle = partial_sum(s, p, result.terms_used + 500);
    CHECK(abs(result.value - oracle) < inverse_power_of_two(m));
    CHECK(result.value == direct_sum(s, r, result.terms_used));
  }
  CHECK(std::abs(effective_partial_sum(s, at(1), 10, rate).value.get_d() - 2.718281828) < 1e-3);
  CHECK(effective_partial_sum(builtin("zero"), at(1), 30, RateFunction::constant(3)).value == 0);
  CHECK_THROWS_AS(effective_partial_sum(s, at(2), 5, rate), RateUndefined);
}

TEST_CASE("ratio_test_probe examples") {
  auto tail = builtin("factorial-tail", {5});
  auto report = ratio_test_probe(tail, at(1, 10), 2, 100);
  REQUIRE(std::holds_alternative<WitnessedDivergence>(report.verdict));
  // Oracle: (n + 1)/10 >= 2 first at n = 19, and stays there.
  Index first = 0;
  for (Index n = 5;; ++n)
    if (Rational(testing::slow_factorial(n + 1), testing::slow_factorial(n)) / 10 >= 2) {
      first = n;
      break;
    }
  CHECK(first == 19);
  CHECK(std::get<WitnessedDivergence>(report.verdict).index == 19);
  CHECK(report.witness->value == 2);
  CHECK(recheck_witness(tail, report));

  CHECK(ratio_test_probe(builtin("zero"), at(1), 2, 100).verdict == Verdict{ConsistentUpToBudget{100}});
  CHECK(ratio_test_probe(builtin("geometric", {Rational(1, 2)}), at(1), 2, 100).verdict ==
        Verdict{ConsistentUpToBudget{100}});
}

TEST_CASE("ratio test requires the threshold to persist") {
  // Ratio 10 at n = 0, then 1/10, then 1 forever.
  auto spike = CoefficientStream::explicit_sequence({1, 10}, 1);
  CHECK(ratio_test_probe(spike, at(1), 2, 50).verdict == Verdict{ConsistentUpToBudget{50}});
  // A spike at the very end of the budget is still a witness: nothing contradicts it.
  auto late = CoefficientStream::explicit_sequence({1, 1, 1, 10}, 10);
  auto report = ratio_test_probe(late, at(1), 2, 3);
  CHECK(report.verdict == Verdict{WitnessedDivergence{2}});
  CHECK_THROWS_AS(ratio_test_probe(late, at(1), 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(ratio_test_probe(late, at(1), 2, 0), std::invalid_argument);
}

TEST_CASE("root_estimate examples") {
  auto zero = root_estimate(builtin("zero"), 100);
  for (const auto& e : zero.entries) CHECK(e.estimate == 0.0);
  CHECK(zero.limsup_proxy == 0.0);
  CHECK_FALSE(zero.implied_radius().has_value());

  auto fact = root_estimate(builtin("factorial-tail", {0}), 50);
  bool past_ten = false;
  for (std::size_t i = 1; i < fact.entries.size(); ++i) {
    CHECK(fact.entries[i].estimate > fact.entries[i - 1].estimate);
    past_ten = past_ten || fact.entries[i].estimate > 10;
  }
  CHECK(past_ten);
  double log_sum = 0;
  for (int i = 2; i <= 50; ++i) log_sum += std::log(static_cast<double>(i));
  CHECK(fact.entries.back().n == 50);
  CHECK(fact.entries.back().estimate == doctest::Approx(std::exp(log_sum / 50)).epsilon(1e-12));

  auto geo = root_estimate(builtin("geometric", {Rational(1, 2)}), 100);
  CHECK(geo.limsup_proxy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*geo.implied_radius() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("root-estimate soundness on Geometric(r), n <= 200") {
  for (const Rational& r : {Rational(1, 2), Rational(3, 7), Rational(5, 2), Rational(1, 1000), Rational(-2, 3)}) {
    const double expected = std::abs(r.get_d());
    for (const auto& e : root_estimate(builtin("geometric", {r}), 200).entries)
      CHECK(std::abs(e.estimate - expected) <= kRootEstimateRelativeError * expected);
  }
}

TEST_CASE("trailing max is the max over [ceil(n/2), n]") {
  auto s = CoefficientStream::explicit_sequence({0, 5, 1, 1, 1, 1, 1, 1, 1}, 1);
  auto report = root_estimate(s, 8);
  CHECK(report.entries[0].trailing_max == doctest::Approx(5.0));
  CHECK(report.entries[1].trailing_max == doctest::Approx(5.0));  // window [1, 2]
  CHECK(report.entries[2].trailing_max == doctest::Approx(1.0));  // window [2, 3]
  CHECK(report.limsup_proxy == doctest::Approx(1.0));
}

TEST_CASE("check_effective_criterion examples") {
  auto one = check_effective_criterion(builtin("one"), RateFunction::constant(1), 1, 20, 500);
  CHECK(one.verdict == Verdict{ConsistentUpToBudget{500}});

  auto fact_stream = builtin("factorial-tail", {0});
  auto fact = check_effective_criterion(fact_stream, RateFunction::constant(1), 1, 5, 100);
  REQUIRE(std::holds_alternative<WitnessedBoundViolation>(fact.verdict));
  // Oracle: at k = 0 the bound is 2; first n >= 1 with n! >= 2^n.
  unsigned long first = 1;
  while (testing::slow_factorial(first) < Natural(1) << first) ++first;
  CHECK(first == 4);
  CHECK(fact.witness->get("k") == 0);
  CHECK(fact.witness->index == first);
  CHECK(recheck_witness(fact_stream, fact));

  auto zero = check_effective_criterion(builtin("zero"), RateFunction::linear(1, 1), 1000, 10, 200);
  CHECK(zero.verdict == Verdict{ConsistentUpToBudget{200}});
}

TEST_CASE("effective criterion settles exact boundary cases exactly") {
  // |a_n|^(1/n) == 2 exactly: 2 < 1/1 + 2^0 fails by equality, so it is a violation.
  auto s = builtin("geometric", {2});
  auto report = check_effective_criterion(s, RateFunction::constant(1), 1, 0, 10);
  REQUIRE(report.witness);
  CHECK(report.witness->index == 1);
  CHECK(recheck_witness(s, report));
  // Radius 1/2: bound 2 + 2^-k strictly exceeds 2 for every k.
  CHECK_FALSE(is_witness(check_effective_criterion(s, RateFunction::constant(1), Rational(1, 2), 40, 60).verdict));
}

TEST_CASE("check_modulus examples") {
  CHECK(check_modulus(builtin("zero"), at(1), 0, RateFunction::constant(0), 30).verdict ==
        Verdict{ConsistentUpToBudget{30}});

  auto geo = builtin("geometric", {Rational(1, 2)});
  CHECK(check_modulus(geo, at(1), 2, RateFunction::linear(1, 1), 20).verdict == Verdict{ConsistentUpToBudget{20}});

  auto bad = check_modulus(geo, at(1), 2, RateFunction::constant(0), 5);
  REQUIRE(std::holds_alternative<WitnessedBoundViolation>(bad.verdict));
  // |S_0 - 2| = 1 >= 2^-0: the first violation is already at n = 0.
  CHECK(bad.witness->get("n") == 0);
  CHECK(bad.witness->get("k") == 0);
  CHECK(bad.witness->value == 1);
  CHECK(recheck_witness(geo, bad));
}

TEST_CASE("modulus samples") {
  CHECK(modulus_samples(0) == std::vector<Index>{0, 1, 2, 4, 8, 16, 32, 64});
  CHECK(modulus_samples(3) == std::vector<Index>{3, 4, 5, 7, 11, 19, 35, 67});
}

TEST_CASE("witness re-check rejects tampered certificates") {
  auto tail = builtin("factorial-tail", {5});
  auto report = ratio_test_probe(tail, at(1, 10), 2, 100);
  auto tampered = report;
  tampered.witness->index = 10;
  CHECK_FALSE(recheck_witness(tail, tampered));
  CHECK_FALSE(recheck_witness(builtin("one"), report));
  SeriesProbeReport consistent;
  CHECK_FALSE(recheck_witness(tail, consistent));
}

TEST_CASE("no probe ever claims convergence") {
  auto exp = builtin("reciprocal-factorial");
  for (const auto& verdict : {ratio_test_probe(exp, at(1), 2, 200).verdict,
                              check_effective_criterion(exp, RateFunction::constant(1), 1, 10, 200).verdict,
                              check_modulus(exp, at(0), 1, RateFunction::constant(0), 10).verdict}) {
    CHECK(std::holds_alternative<ConsistentUpToBudget>(verdict));
    CHECK_FALSE(is_witness(verdict));
  }
}
