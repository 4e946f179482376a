// Parallel kernels against their serial references.

#include "haltseries/coefficients.hpp"
#include "haltseries/generate.hpp"
#include "haltseries/kernels.hpp"
#include "haltseries/series.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

std::vector<hs::MachineProgram> batch(std::size_t count) {
  std::mt19937_64 rng(7);
  std::vector<hs::MachineProgram> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(hs::random_program(rng, {12, 4}));
  return out;
}

std::vector<hs::Rational> factorial_coefficients(hs::Index n_max) {
  std::vector<hs::Rational> out;
  auto cursor = hs::builtin_stream("factorial-tail", std::vector<hs::Rational>{0}).cursor();
  for (hs::Index n = 0; n <= n_max; ++n) out.push_back(cursor.next());
  return out;
}

template <bool Parallel>
void BM_RunBatch(benchmark::State& state) {
  const auto programs = batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = Parallel ? hs::kernels::run_batch(programs, 0, 20000) : hs::reference::run_batch(programs, 0, 20000);
    benchmark::DoNotOptimize(out);
  }
}

template <bool Parallel>
void BM_RootEstimates(benchmark::State& state) {
  const auto coefficients = factorial_coefficients(static_cast<hs::Index>(state.range(0)));
  for (auto _ : state) {
    auto out = Parallel ? hs::kernels::root_estimates(coefficients) : hs::reference::root_estimates(coefficients);
    benchmark::DoNotOptimize(out);
  }
}

template <bool Parallel>
void BM_ModulusViolation(benchmark::State& state) {
  // An honest modulus: every row scans all of its samples.
  const auto n_max = static_cast<unsigned>(state.range(0));
  const auto stream = hs::builtin_stream("geometric", std::vector<hs::Rational>{hs::Rational(1, 2)});
  std::vector<hs::ModulusRow> rows;
  for (unsigned n = 0; n <= n_max; ++n) rows.push_back({n, hs::modulus_samples(n + 1)});
  const auto sums = hs::partial_sums(stream, hs::EvaluationPoint(1), 2 * n_max + 3 + 64);
  for (auto _ : state) {
    auto hit = Parallel ? hs::kernels::first_modulus_violation(sums, 2, rows)
                        : hs::reference::first_modulus_violation(sums, 2, rows);
    benchmark::DoNotOptimize(hit);
  }
}

}  // namespace

BENCHMARK(BM_RunBatch<false>)->Arg(200);
BENCHMARK(BM_RunBatch<true>)->Arg(200);
BENCHMARK(BM_RootEstimates<false>)->Arg(2000);
BENCHMARK(BM_RootEstimates<true>)->Arg(2000);
BENCHMARK(BM_ModulusViolation<false>)->Arg(200);
BENCHMARK(BM_ModulusViolation<true>)->Arg(200);

BENCHMARK_MAIN();
