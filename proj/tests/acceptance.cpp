// Acceptance suite: one PASS/FAIL line per criterion, with wall-clock limits.

#include "haltseries/errors.hpp"
#include "haltseries/generate.hpp"
#include "haltseries/godel.hpp"
#include "haltseries/kernels.hpp"
#include "haltseries/reductions.hpp"

#include "corpus.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace hs;

namespace {

/// Collects the first few failure messages of a criterion.
class Failures {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++count_;
    if (count_ <= 3) first_ += (first_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const { return std::to_string(count_) + " failure(s): " + first_; }

 private:
  std::size_t count_ = 0;
  std::string first_;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0: no runtime requirement
  std::function<std::string(Failures&)> body;  // returns a short note
};

CoefficientStream builtin(const char* name, std::vector<Rational> params = {}) { return builtin_stream(name, params); }

const std::vector<Rational> kTestedR{Rational(1, 10), Rational(1, 2), Rational(1)};

std::string dichotomy(Failures& f) {
  const auto corpus = testing::load_corpus();
  std::size_t halting = 0, nonhalting = 0;
  for (const auto& m : corpus) {
    const Natural input = m.input;
    if (m.n0) {
      f.expect(*m.n0 >= 1 && *m.n0 <= 50, m.name + ": n0 outside [1, 50]");
      ++halting;
    } else {
      f.expect(testing::structurally_nonhalting(m.program), m.name + ": not structurally non-halting");
      ++nonhalting;
    }
    // Oracle n0: a separate bounded run, no shared memo.
    const auto oracle = run_bounded(m.program, input, 200);
    const auto* h = std::get_if<HaltedAt>(&oracle);
    f.expect(m.n0 ? (h && h->steps == *m.n0) : !h, m.name + ": hand-verified n0 disagrees with run_bounded");

    const auto stream = forward_reduce(m.program, input).stream;
    auto cursor = stream.cursor();
    for (Index n = 0; n <= 200; ++n) {
      const Rational expected = h && n >= h->steps ? Rational(testing::slow_factorial(n)) : Rational(0);
      const Rational got = cursor.next();
      f.expect(got == expected && stream.at(n) == expected, m.name + ": a_" + std::to_string(n) + " wrong");
    }

    for (const auto& r : kTestedR) {
      if (m.n0) {
        auto report = semidecide_halting_via_series(m.program, input, EvaluationPoint(r), 200);
        f.expect(std::holds_alternative<WitnessedDivergence>(report.verdict) && recheck_witness(stream, report),
                 m.name + ": no witness at r=" + to_string(r));
      } else {
        auto report = semidecide_halting_via_series(m.program, input, EvaluationPoint(r), 10000);
        f.expect(report.verdict == Verdict{ConsistentUpToBudget{10000}}, m.name + ": not consistent at r=" + to_string(r));
      }
    }
    if (!m.n0) {
      auto cursor_long = stream.cursor();
      bool zero = true;
      for (Index n = 0; n <= 10000; ++n) zero = zero && cursor_long.next() == 0;
      f.expect(zero, m.name + ": nonzero coefficient below 10^4");
    }
  }
  f.expect(corpus.size() >= 10 && halting >= 5 && nonhalting >= 5, "corpus too small");
  return std::to_string(halting) + " halting + " + std::to_string(nonhalting) + " non-halting machines";
}

std::string algorithm_accuracy(Failures& f) {
  const auto stream = builtin("reciprocal-factorial");
  const auto rate = RateFunction::exp_tail();
  int checked = 0;
  for (const Rational& r : {Rational(0), Rational(1, 2), Rational(1)}) {
    const EvaluationPoint p(r);
    for (unsigned m = 1; m <= 20; ++m) {
      const auto result = effective_partial_sum(stream, p, m, rate);
      const Rational oracle = partial_sum(stream, p, result.terms_used + 500);
      f.expect(abs(result.value - oracle) < inverse_power_of_two(m),
               "m=" + std::to_string(m) + " r=" + to_string(r));
      ++checked;
    }
  }
  return std::to_string(checked) + " (m, r) pairs";
}

std::string describe(const DetectorOutcome& out) {
  if (const auto* h = std::get_if<DetectorHalted>(&out.result)) {
    const auto& c = std::get<ThresholdCertificate>(h->certificate);
    return "halted at N=" + std::to_string(c.n) + " with S_N=" + to_string(c.partial_sum) + ", expected StillRunning";
  }
  return "StillRunning after " + std::to_string(std::get<DetectorStillRunning>(out.result).budget);
}

std::string detector_q(Failures& f) {
  auto one = run_detector(build_detector_q(builtin("one")), 10000);
  const auto* h = std::get_if<DetectorHalted>(&one.result);
  const auto* cert = h ? std::get_if<ThresholdCertificate>(&h->certificate) : nullptr;
  f.expect(cert && cert->n == 1 && cert->partial_sum == 2, "One: expected halt at N=1 with S_1=2");
  f.expect(cert && recheck_certificate(build_detector_q(builtin("one")), *cert), "One: certificate fails re-check");

  for (auto [name, stream] : {std::pair{"Zero", builtin("zero")},
                              std::pair{"Geometric(1/2)", builtin("geometric", {Rational(1, 2)})}}) {
    auto out = run_detector(build_detector_q(stream), 10000);
    const auto* running = std::get_if<DetectorStillRunning>(&out.result);
    f.expect(running && running->budget == 10000, std::string(name) + ": " + describe(out));
  }
  auto harmonic = run_detector(build_detector_q(builtin("harmonic")), 1000000);
  const auto* running = std::get_if<DetectorStillRunning>(&harmonic.result);
  f.expect(running && running->budget == 1000000, "Harmonic: " + describe(harmonic));
  std::ostringstream note;
  if (harmonic.last) note << "Harmonic S_" << harmonic.last->n << " ~ " << to_decimal(harmonic.last->lower, 8);
  return note.str();
}

std::string literal_ps(Failures& f) {
  const auto corpus = testing::load_corpus();
  std::vector<std::pair<std::string, CoefficientStream>> streams{
      {"Zero", builtin("zero")},
      {"One", builtin("one")},
      {"Harmonic", builtin("harmonic")},
      {"Alternating", builtin("alternating")},
      {"Geometric(1/2)", builtin("geometric", {Rational(1, 2)})},
      {"forward(three_step)", forward_reduce(corpus[1].program, corpus[1].input).stream},
      {"forward(self_loop)", forward_reduce(corpus[8].program, corpus[8].input).stream},
  };
  std::size_t windows = 0;
  for (const auto& [name, stream] : streams) {
    auto detector = build_detector_ps(stream);
    f.expect(detector.options.literal(), name + ": not the literal construction");
    auto out = run_detector(detector, 1000);
    f.expect(!out.halted(), name + ": halted");
    f.expect(out.windows.size() == 1000, name + ": missing window records");
    for (std::size_t i = 0; i < out.windows.size(); ++i)
      f.expect(out.windows[i].k == i + 1 && out.windows[i].n == out.windows[i].k,
               name + ": round " + std::to_string(i + 1) + " did not record N = k");
    windows += out.windows.size();
  }
  return std::to_string(streams.size()) + " streams, " + std::to_string(windows) + " windows with N = k";
}

std::string godel(Failures& f) {
  std::size_t count = 0;
  for (const auto& m : testing::load_corpus()) {
    f.expect(decode_godel(encode_godel(m.program)) == m.program, m.name + ": round trip failed");
    ++count;
  }
  std::mt19937_64 rng(20240601);
  const ProgramShape shape{12, 5};
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_program(rng, shape);
    f.expect(decode_godel(encode_godel(p)) == p, "random program " + std::to_string(i) + ": round trip failed");
    ++count;
  }
  // Malformed codes: non-positive, truncated gamma, trailing bits, bad register, dangling target.
  const Natural dangling = [] {
    // 1 . gamma(1 register) . gamma(1 instruction) . gamma(code(decjz r0 L5) + 1)
    const Natural c = instruction_code(DecJz{0, 5}) + 1;
    std::string bits = "1" "1" "1";
    const std::string cb = c.get_str(2);
    bits += std::string(cb.size() - 1, '0') + cb;
    return Natural(bits, 2);
  }();
  std::size_t rejected = 0;
  for (const Natural& bad : std::vector<Natural>{Natural(0), Natural(-5), Natural(1), Natural("11110", 2), Natural("1101011", 2) * 2,
                             Natural("100101", 2), dangling}) {
    try {
      (void)decode_godel(bad);
      f.expect(false, "code " + bad.get_str() + " accepted");
    } catch (const InvalidEncoding& e) {
      f.expect(std::string(e.what()).size() > 0, "empty diagnostic");
      ++rejected;
    }
  }
  return std::to_string(count) + " round trips, " + std::to_string(rejected) + " invalid codes rejected";
}

std::string soundness(Failures& f) {
  std::mt19937_64 rng(7);
  std::vector<MachineProgram> programs;
  for (int i = 0; i < 200; ++i) programs.push_back(random_program(rng));
  const StepCount budget = 1000;
  const auto batch = kernels::run_batch(programs, 1, budget);
  std::size_t witnesses = 0, consistent = 0;
  for (std::size_t i = 0; i < programs.size(); ++i) {
    const auto independent = run_bounded(programs[i], 1, budget);  // oracle
    const bool halted = std::holds_alternative<HaltedAt>(independent);
    f.expect(batch[i] == independent, "batch run disagrees on machine " + std::to_string(i));
    for (const Rational& r : {Rational(1), Rational(1, 2)}) {
      auto report = semidecide_halting_via_series(programs[i], 1, EvaluationPoint(r), budget);
      const bool witness = std::holds_alternative<WitnessedDivergence>(report.verdict);
      f.expect(!witness || halted, "false witness on machine " + std::to_string(i));
      f.expect(witness || std::holds_alternative<ConsistentUpToBudget>(report.verdict),
               "unexpected verdict on machine " + std::to_string(i));
      witnesses += witness;
      consistent += !witness;
    }
  }
  return std::to_string(witnesses) + " witnesses (all confirmed), " + std::to_string(consistent) + " consistent";
}

std::string invariants(Failures& f) {
  std::size_t checks = 0;
  const auto corpus = testing::load_corpus();
  // Partial-sum recurrence.
  std::vector<CoefficientStream> streams{builtin("harmonic"), builtin("alternating"), builtin("reciprocal-factorial"),
                                         builtin("geometric", {Rational(-3, 5)}), builtin("factorial-tail", {4}),
                                         forward_reduce(corpus[5].program, 0).stream};
  for (const auto& s : streams)
    for (const Rational& r : {Rational(1), Rational(2, 3)}) {
      const auto sums = partial_sums(s, EvaluationPoint(r), 60);
      for (Index n = 1; n <= 60; ++n, ++checks)
        f.expect(sums[n] == sums[n - 1] + s.at(n) * pow(r, n), "recurrence " + s.describe());
    }
  // Witness re-checkability.
  const auto tail = builtin("factorial-tail", {5});
  const auto geo = builtin("geometric", {Rational(1, 2)});
  const auto fact = builtin("factorial-tail", {0});
  const std::vector<std::pair<CoefficientStream, SeriesProbeReport>> witnessed{
      {tail, ratio_test_probe(tail, EvaluationPoint(Rational(1, 10)), 2, 100)},
      {fact, check_effective_criterion(fact, RateFunction::constant(1), 1, 5, 100)},
      {geo, check_modulus(geo, EvaluationPoint(Rational(1)), 2, RateFunction::constant(0), 5)},
      {geo, check_modulus(geo, EvaluationPoint(Rational(1)), Rational(21, 10), RateFunction::linear(1, 1), 20)},
  };
  for (const auto& [s, report] : witnessed) {
    f.expect(is_witness(report.verdict) && recheck_witness(s, report), "witness fails re-check");
    ++checks;
  }
  // Root-estimate soundness on Geometric(r).
  for (const Rational& r : {Rational(1, 2), Rational(3, 7), Rational(7, 3), Rational(1, 1000), Rational(-5, 4),
                            Rational(999, 1000)}) {
    const double expected = std::abs(r.get_d());
    for (const auto& e : root_estimate(builtin("geometric", {r}), 200).entries) {
      f.expect(std::abs(e.estimate - expected) <= kRootEstimateRelativeError * expected,
               "root estimate r=" + to_string(r) + " n=" + std::to_string(e.n));
      ++checks;
    }
  }
  // Monotone halting and upward-closed support.
  std::mt19937_64 rng(99);
  std::vector<std::pair<MachineProgram, Natural>> machines;
  for (const auto& m : corpus) machines.emplace_back(m.program, m.input);
  for (int i = 0; i < 50; ++i) machines.emplace_back(random_program(rng), 2);
  for (const auto& [program, input] : machines) {
    const auto stream = forward_reduce(program, input).stream;
    auto cursor = stream.cursor();
    bool seen_nonzero = false, seen_halted = false;
    for (Index n = 0; n <= 2000; ++n, ++checks) {
      const bool nonzero = cursor.next() != 0;
      const bool halted = stream.halted_by(n);
      f.expect(!seen_nonzero || nonzero, "support not upward closed");
      f.expect(!seen_halted || halted, "halting not monotone");
      f.expect(halted == nonzero, "support differs from halted_by");
      seen_nonzero = nonzero;
      seen_halted = halted;
    }
  }
  return std::to_string(checks) + " checks";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "halting dichotomy of the forward reduction", 10, dichotomy},
      {2, "effective partial sums within 2^-m", 5, algorithm_accuracy},
      {3, "threshold detector Q and its Harmonic gap", 30, detector_q},
      {4, "literal Cauchy detector P_S is vacuous", 60, literal_ps},
      {5, "Godel numbering round trip", 5, godel},
      {6, "halting semidecision never lies", 0, soundness},
      {7, "series invariant suite", 0, invariants},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Failures f;
    std::string note;
    const auto start = std::chrono::steady_clock::now();
    try {
      note = c.body(f);
    } catch (const std::exception& e) {
      f.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0) {
      std::ostringstream limit;
      limit << "runtime " << seconds << " s exceeds " << c.limit_seconds << " s";
      f.expect(seconds < c.limit_seconds, limit.str());
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s", seconds);
    std::cout << (f.ok() ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << timing
              << (c.limit_seconds > 0 ? ", limit " + std::to_string(static_cast<int>(c.limit_seconds)) + " s" : "")
              << "): " << (f.ok() ? note : f.summary()) << "\n";
    failed += !f.ok();
  }
  return failed == 0 ? 0 : 1;
}
