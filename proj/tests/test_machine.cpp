#include "haltseries/errors.hpp"
#include "haltseries/generate.hpp"
#include "haltseries/machine.hpp"

#include "corpus.hpp"

#include <doctest.h>

using namespace hs;

namespace {

const MachineProgram kSelfLoop = parse_program("loop: decjz 1 loop");
const MachineProgram kThreeStep = parse_program("inc 0\ninc 0\nhalt\n");

std::size_t error_line(std::string_view text) {
  try {
    parse_program(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("expected a parse error");
  return 0;
}

}  // namespace

TEST_CASE("parse_program examples") {
  auto halt = parse_program("halt");
  CHECK(halt.size() == 1);
  CHECK(std::holds_alternative<Halt>(halt.instructions()[0]));

  CHECK(kSelfLoop.size() == 1);
  CHECK(kSelfLoop.instructions()[0] == Instruction{DecJz{1, 0}});
  CHECK(kSelfLoop.register_count() == 2);

  CHECK(error_line("inc") == 1);
}

TEST_CASE("parse_program accepts labels, comments and numeric targets") {
  auto p = parse_program(R"(# header comment
start:
  inc 2          # trailing comment
  decjz 2 start
  decjz 0 0
  halt
)");
  REQUIRE(p.size() == 4);
  CHECK(p.instructions()[1] == Instruction{DecJz{2, 0}});
  CHECK(p.instructions()[2] == Instruction{DecJz{0, 0}});
  CHECK(p.register_count() == 3);
}

TEST_CASE("parse_program diagnostics") {
  CHECK(error_line("inc 0\ndecjz 0 nowhere\n") == 2);
  CHECK(error_line("halt\ndecjz 0 7\n") == 2);
  CHECK(error_line("registers 2\ninc 0\ninc 5\n") == 3);
  CHECK(error_line("inc 99999\n") == 1);
  CHECK(error_line("inc 0\nfoo 1\n") == 2);
  CHECK(error_line("a: inc 0\na: halt\n") == 2);
  CHECK(error_line("halt 3\n") == 1);
  CHECK(error_line("inc x\n") == 1);
  CHECK(error_line("halt\nend:\n") == 2);
  CHECK_THROWS_AS(parse_program("# nothing\n\n"), ParseError);
}

TEST_CASE("format_program round-trips through the parser") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    auto p = random_program(rng, {10, 5});
    CHECK(parse_program(format_program(p)) == p);
  }
  MachineProgram wide({Instruction{Halt{}}}, 7);
  CHECK(parse_program(format_program(wide)) == wide);
}

TEST_CASE("step semantics") {
  MachineProgram inc({Inc{0}, Halt{}}, 1);
  MachineState s{0, {Natural(4)}, 0};
  s = step(inc, s);
  CHECK(s.registers[0] == 5);
  CHECK(s.pc == 1);
  CHECK(s.steps_executed == 1);

  MachineProgram dec({Halt{}, DecJz{0, 0}}, 1);
  MachineState zero{1, {Natural(0)}, 0};
  zero = step(dec, zero);
  CHECK(zero.pc == 0);
  CHECK(zero.registers[0] == 0);

  MachineState three{1, {Natural(3)}, 0};
  three = step(dec, three);
  CHECK(three.registers[0] == 2);
  CHECK(three.pc == 2);
  CHECK(three.halted(dec));

  MachineState halt{0, {Natural(0)}, 0};
  halt = step(dec, halt);
  CHECK(halt.pc == dec.size());
  CHECK_THROWS_AS(step(dec, halt), std::logic_error);
}

TEST_CASE("registers are unbounded") {
  MachineProgram inc({Inc{0}}, 1);
  Natural big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 200);
  auto s = step(inc, initial_state(inc, big));
  CHECK(s.registers[0] == big + 1);
}

TEST_CASE("run_bounded examples") {
  CHECK(run_bounded(parse_program("halt"), 0, 10) == ExecutionOutcome{HaltedAt{1}});
  CHECK(run_bounded(kSelfLoop, 0, 1'000'000) == ExecutionOutcome{RunningAfter{1'000'000}});
  CHECK(run_bounded(kThreeStep, 0, 10) == ExecutionOutcome{HaltedAt{3}});
  CHECK(run_bounded(kThreeStep, 0, 0) == ExecutionOutcome{RunningAfter{0}});
}

TEST_CASE("halted_by fixes the step-counting convention") {
  CHECK_FALSE(halted_by(kSelfLoop, 0, 1000));
  CHECK_FALSE(halted_by(parse_program("halt"), 0, 0));
  CHECK(halted_by(parse_program("halt"), 0, 1));
  CHECK_FALSE(halted_by(kThreeStep, 0, 2));
  CHECK(halted_by(kThreeStep, 0, 3));
}

TEST_CASE("corpus: hand-counted halting steps and structural non-halting") {
  for (const auto& m : testing::load_corpus()) {
    CAPTURE(m.name);
    auto outcome = run_bounded(m.program, m.input, 10'000);
    if (m.n0) {
      CHECK(outcome == ExecutionOutcome{HaltedAt{*m.n0}});
      // HaltedAt(n0): n0 steps reach a halted state and n0 - 1 do not.
      CHECK(halted_by(m.program, m.input, *m.n0));
      CHECK_FALSE(halted_by(m.program, m.input, *m.n0 - 1));
    } else {
      CHECK(testing::structurally_nonhalting(m.program));
      CHECK(outcome == ExecutionOutcome{RunningAfter{10'000}});
    }
  }
}

TEST_CASE("corpus: monotone halting and budget consistency up to 10^4") {
  for (const auto& m : testing::load_corpus()) {
    CAPTURE(m.name);
    // f(n) for n = 0..10^4 from one incremental run; once true, true forever.
    Execution run(m.program, m.input);
    bool seen = false;
    for (StepCount n = 0; n <= 10'000; ++n) {
      run.run_until(n);
      const bool f = run.halted();
      if (seen) CHECK(f);
      seen = seen || f;
    }
    for (StepCount budget : {1u, 5u, 23u, 100u, 9999u}) {
      auto a = run_bounded(m.program, m.input, budget);
      CHECK(a == run_bounded(m.program, m.input, budget));
      if (const auto* h = std::get_if<HaltedAt>(&a))
        for (StepCount larger : {h->steps, budget, budget * 2 + 7})
          CHECK(run_bounded(m.program, m.input, larger) == a);
    }
  }
}

TEST_CASE("Execution resumes where it stopped") {
  auto add = testing::load_corpus()[4].program;
  Execution a(add, 0);
  for (StepCount n = 0; n <= 20; ++n) a.run_until(n);
  CHECK(a.halted());
  CHECK(a.steps() == 16);
  CHECK(a.state().registers[1] == 5);
}
