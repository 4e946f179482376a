#include "haltseries/cli.hpp"

#include "haltseries/errors.hpp"
#include "haltseries/godel.hpp"
#include "haltseries/reductions.hpp"
#include "haltseries/report.hpp"
#include "haltseries/specs.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

namespace hs::cli {
namespace {

struct Options {
  std::string file;
  std::string input = "0";
  std::uint64_t budget = 0;
  std::string r = "1";
  std::string kind;
  std::string format = "text";
  unsigned m = 0;
  std::string rate = "exptail";
  std::string threshold = "2";
  std::string radius = "1";
  unsigned k_max = 10;
  std::string m_rate = "const:1";
  std::string limit = "0";
  unsigned n_max = 10;
  std::uint64_t horizon = 1;
  bool half = false;
  std::string tolerance;
  std::string decode;
};

int exit_for(const Verdict& verdict) { return is_witness(verdict) ? kExitWitness : kExitBudgetExhausted; }

std::string emit(const SeriesProbeReport& report, const std::string& format) {
  return format == "kv" ? format_probe_kv(report) : format_probe_text(report);
}

Rational rational_flag(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError(std::string("--") + name, e.what());
  }
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto program = load_program(o.file);
  const auto outcome = run_bounded(program, parse_natural(o.input), o.budget);
  out << to_string(outcome) << "\n";
  return std::holds_alternative<HaltedAt>(outcome) ? kExitWitness : kExitBudgetExhausted;
}

int cmd_forward(const Options& o, std::ostream& out) {
  const auto program = load_program(o.file);
  const auto reduction = forward_reduce(program, parse_natural(o.input));
  const EvaluationPoint point(rational_flag(o.r, "r"));

  std::optional<Index> first;
  for (Index n = 0; n <= o.budget && !first; ++n)
    if (!reduction.stream.is_zero_at(n)) first = n;
  out << "coefficients: ";
  if (!first) {
    out << "all zero up to " << o.budget << "\n";
  } else {
    out << "first nonzero at n=" << *first << "\n";
    for (Index n = *first; n < *first + 10; ++n)
      out << "  a_" << n << " = " << abbreviate(coefficient_at(reduction.stream, n)) << "\n";
  }
  const auto report = semidecide_halting_via_series(program, reduction.input, point, o.budget);
  out << emit(report, o.format);
  return exit_for(report.verdict);
}

int cmd_detect(const Options& o, std::ostream& out) {
  const auto stream = load_series_spec(o.file);
  DetectorProgram detector = build_detector_q(stream);
  if (o.kind == "ps") {
    CauchyWindowOptions options;
    options.horizon_factor = o.horizon;
    options.half_window = o.half;
    if (!o.tolerance.empty()) options.fixed_tolerance = rational_flag(o.tolerance, "tolerance");
    detector = build_detector_ps(stream, options);
  }
  const auto outcome = run_detector(detector, o.budget);
  out << format_detector(detector, outcome);
  return outcome.halted() ? kExitWitness : kExitBudgetExhausted;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto stream = load_series_spec(o.file);
  const EvaluationPoint point(rational_flag(o.r, "r"));
  const auto rate = parse_rate(o.rate);
  const auto result = effective_partial_sum(stream, point, o.m, rate);
  out << "series: " << stream.describe() << "\n";
  out << "r: " << to_string(point.r()) << "\n";
  out << "m: " << o.m << "\n";
  out << "rate: " << rate.describe() << "\n";
  out << "terms: " << result.terms_used << "\n";
  out << "value: " << to_string(result.value) << "\n";
  out << "approx: " << to_decimal(result.value) << "\n";
  out << "claim: |value - S(r)| < 2^-" << o.m << " if the rate is honest\n";
  return kExitWitness;
}

int cmd_probe(const Options& o, std::ostream& out) {
  const auto stream = load_series_spec(o.file);
  if (o.kind == "root") {
    out << format_root_estimates(root_estimate(stream, o.budget));
    return kExitWitness;
  }
  SeriesProbeReport report;
  if (o.kind == "ratio") {
    report = ratio_test_probe(stream, EvaluationPoint(rational_flag(o.r, "r")), rational_flag(o.threshold, "threshold"),
                              o.budget);
  } else if (o.kind == "criterion") {
    report = check_effective_criterion(stream, parse_rate(o.m_rate), rational_flag(o.radius, "radius"), o.k_max,
                                       o.budget);
  } else {
    report = check_modulus(stream, EvaluationPoint(rational_flag(o.r, "r")), rational_flag(o.limit, "limit"),
                           parse_rate(o.rate), o.n_max);
  }
  out << emit(report, o.format);
  return exit_for(report.verdict);
}

int cmd_encode(const Options& o, std::ostream& out) {
  if (!o.decode.empty()) {
    out << format_program(decode_godel(parse_natural(o.decode)));
    return kExitWitness;
  }
  const auto program = load_program(o.file);
  const Natural code = encode_godel(program);
  if (decode_godel(code) != program) throw std::logic_error("Gödel round-trip failed");
  out << code.get_str() << "\n";
  return kExitWitness;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Halting/power-series reductions with budgeted semidecisions", "haltseries"};
  app.require_subcommand(1);
  Options o;

  auto positive = CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max());
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "kv"}));
  };

  auto* simulate = app.add_subcommand("simulate", "Run a counter machine for a bounded number of steps");
  simulate->add_option("machine", o.file, "Machine source file")->required();
  simulate->add_option("--input", o.input, "Natural loaded into register 0");
  simulate->add_option("--budget", o.budget, "Step budget")->required()->check(positive);

  auto* forward = app.add_subcommand("forward", "Program -> power series; ratio-test the result");
  forward->add_option("machine", o.file, "Machine source file")->required();
  forward->add_option("--input", o.input, "Natural loaded into register 0");
  forward->add_option("--r", o.r, "Evaluation point |z| as p/q (> 0)");
  forward->add_option("--budget", o.budget, "Coefficient index budget")->required()->check(positive);
  add_format(forward);

  auto* detect = app.add_subcommand("detect", "Run a divergence detector at z = 1");
  detect->add_option("series", o.file, "Series spec file")->required();
  detect->add_option("--kind", o.kind, "q or ps")->required()->check(CLI::IsMember({"q", "ps"}));
  detect->add_option("--budget", o.budget, "Outer iterations")->required()->check(positive);
  detect->add_option("--horizon", o.horizon, "ps heuristic: examine S_1..S_{h k}")->check(positive);
  detect->add_flag("--half", o.half, "ps heuristic: candidates N <= k/2");
  detect->add_option("--tolerance", o.tolerance, "ps heuristic: fixed tolerance p/q");

  auto* eval = app.add_subcommand("eval", "Partial sum with a caller-supplied rate function");
  eval->add_option("series", o.file, "Series spec file")->required();
  eval->add_option("--r", o.r, "Evaluation point |z| as p/q");
  eval->add_option("--m", o.m, "Precision exponent: target 2^-m")->required();
  eval->add_option("--rate", o.rate, "exptail | const:N | linear:A:B | table:M:R:N,...");

  auto* probe = app.add_subcommand("probe", "Budgeted convergence probes");
  probe->add_option("series", o.file, "Series spec file")->required();
  probe->add_option("--kind", o.kind, "ratio | root | criterion | modulus")
      ->required()
      ->check(CLI::IsMember({"ratio", "root", "criterion", "modulus"}));
  probe->add_option("--budget", o.budget, "Index budget (ratio, root, criterion)")->check(positive);
  probe->add_option("--r", o.r, "Evaluation point (ratio, modulus)");
  probe->add_option("--threshold", o.threshold, "Ratio threshold > 1 (ratio)");
  probe->add_option("--radius", o.radius, "Disk radius R > 0 (criterion)");
  probe->add_option("--k-max", o.k_max, "Largest k (criterion)");
  probe->add_option("--m-rate", o.m_rate, "M(k) as a rate spec (criterion)");
  probe->add_option("--limit", o.limit, "Claimed limit (modulus)");
  probe->add_option("--rate", o.rate, "e(n) as a rate spec (modulus)");
  probe->add_option("--n-max", o.n_max, "Largest precision n (modulus)");
  add_format(probe);

  auto* encode = app.add_subcommand("encode", "Gödel number of a machine, or decode one");
  encode->add_option("machine", o.file, "Machine source file");
  encode->add_option("--decode", o.decode, "Decode this natural instead");

  // CLI11 consumes arguments from the back, without the program name.
  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
    if (probe->parsed() && o.kind != "modulus" && o.budget == 0)
      throw CLI::RequiredError("--budget is required for --kind " + o.kind);
    if (encode->parsed() && o.file.empty() == o.decode.empty())
      throw CLI::ValidationError("encode", "give exactly one of a machine file or --decode");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (forward->parsed()) return cmd_forward(o, out);
    if (detect->parsed()) return cmd_detect(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (probe->parsed()) return cmd_probe(o, out);
    return cmd_encode(o, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const InvalidEncoding& e) {
    err << "error: " << e.what() << "\n";
  } catch (const RateUndefined& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace hs::cli
