#include "haltseries/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace hs {
namespace {

std::string with_approx(const Rational& value) {
  return abbreviate(value) + "  (approx " + to_decimal(value) + ")";
}

std::string verdict_line(const Verdict& verdict) {
  if (const auto* d = std::get_if<WitnessedDivergence>(&verdict))
    return "WitnessedDivergence at n=" + std::to_string(d->index);
  if (const auto* v = std::get_if<WitnessedBoundViolation>(&verdict)) return "WitnessedBoundViolation " + v->detail;
  return "ConsistentUpToBudget(" + std::to_string(std::get<ConsistentUpToBudget>(verdict).budget) + ")";
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace

std::string format_probe_text(const SeriesProbeReport& report) {
  std::ostringstream out;
  out << "probe: " << probe_kind_name(report.kind) << "\n";
  out << "verdict: " << verdict_line(report.verdict) << "\n";
  if (report.witness) {
    out << "witness:\n";
    out << "  index: " << report.witness->index << "\n";
    out << "  value: " << with_approx(report.witness->value) << "\n";
    for (const auto& [name, value] : report.witness->values) out << "  " << name << ": " << with_approx(value) << "\n";
  }
  out << "budget used: " << report.budget_used << "\n";
  if (!report.trace.empty()) {
    out << "trace:\n";
    for (const auto& p : report.trace) out << "  S_" << p.n << " = " << with_approx(p.partial_sum) << "\n";
  }
  return out.str();
}

std::string format_probe_kv(const SeriesProbeReport& report) {
  std::ostringstream out;
  out << "kind=" << probe_kind_name(report.kind) << "\n";
  out << "verdict=" << verdict_name(report.verdict) << "\n";
  if (const auto* d = std::get_if<WitnessedDivergence>(&report.verdict)) out << "verdict.index=" << d->index << "\n";
  if (const auto* v = std::get_if<WitnessedBoundViolation>(&report.verdict)) out << "verdict.detail=" << v->detail << "\n";
  if (const auto* c = std::get_if<ConsistentUpToBudget>(&report.verdict)) out << "verdict.budget=" << c->budget << "\n";
  if (report.witness) {
    out << "witness.index=" << report.witness->index << "\n";
    out << "witness.value=" << to_string(report.witness->value) << "\n";
    for (const auto& [name, value] : report.witness->values) out << "witness." << name << "=" << to_string(value) << "\n";
  }
  out << "budget_used=" << report.budget_used << "\n";
  out << "trace.count=" << report.trace.size() << "\n";
  for (std::size_t i = 0; i < report.trace.size(); ++i)
    out << "trace." << i << "=" << report.trace[i].n << ":" << to_string(report.trace[i].partial_sum) << "\n";
  return out.str();
}

std::string format_root_estimates(const RootEstimateReport& report, std::size_t max_rows) {
  std::ostringstream out;
  out << "root estimates |a_n|^(1/n) (relative precision " << format_double(kRootEstimateRelativeError) << "):\n";
  const auto& e = report.entries;
  // First rows, then the tail, so both the onset and the limiting behavior show.
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (i < max_rows / 2 || i + (max_rows - max_rows / 2) >= e.size()) rows.push_back(i);
  std::size_t previous = 0;
  for (std::size_t i : rows) {
    if (i > previous + 1) out << "  ...\n";
    out << "  n=" << e[i].n << "  estimate=" << format_double(e[i].estimate)
        << "  trailing_max=" << format_double(e[i].trailing_max) << "\n";
    previous = i;
  }
  out << "limsup proxy (diagnostic): " << format_double(report.limsup_proxy) << "\n";
  auto radius = report.implied_radius();
  out << "implied radius (diagnostic): " << (radius ? format_double(*radius) : std::string("inf")) << "\n";
  return out.str();
}

std::string format_detector(const DetectorProgram& detector, const DetectorOutcome& outcome) {
  std::ostringstream out;
  const bool q = detector.kind == DetectorKind::QThreshold;
  out << "detector: " << (q ? "Q (threshold |S_N(1)| > N)" : "PS (Cauchy window)")
      << (!q && !detector.options.literal() ? " [heuristic]" : "") << "\n";
  out << "source: " << detector.source_stream.describe() << "\n";

  if (const auto* h = std::get_if<DetectorHalted>(&outcome.result)) {
    out << "verdict: HALTED at " << (q ? "N=" : "k=") << h->iteration << "\n";
    out << "certificate:\n";
    if (const auto* t = std::get_if<ThresholdCertificate>(&h->certificate)) {
      out << "  N = " << t->n << "\n";
      out << "  S_N = " << to_string(t->partial_sum) << "\n";
      out << "  check: |S_N| > N\n";
    } else {
      const auto& c = std::get<CauchyCertificate>(h->certificate);
      out << "  k = " << c.k << "\n";
      out << "  horizon = " << c.horizon << "\n";
      out << "  candidates N = 1.." << c.n_limit << "\n";
      out << "  tolerance = " << to_string(c.tolerance) << "\n";
      out << "  m = " << c.m_index << ", S_m = " << to_string(c.s_m) << "\n";
      out << "  n = " << c.n_index << ", S_n = " << to_string(c.s_n) << "\n";
      out << "  check: |S_m - S_n| >= tolerance with m, n in [" << c.n_limit << ", " << c.horizon << "]\n";
    }
  } else {
    out << "verdict: STILL RUNNING after " << std::get<DetectorStillRunning>(outcome.result).budget
        << (outcome.cancelled ? " (cancelled)" : "") << "\n";
  }

  out << "trace (first " << std::min(outcome.trace.size(), kDetectorTracePoints) << "):\n";
  for (std::size_t i = 0; i < outcome.trace.size() && i < kDetectorTracePoints; ++i)
    out << "  S_" << outcome.trace[i].n << " = " << with_approx(outcome.trace[i].partial_sum) << "\n";
  if (outcome.last) {
    const auto& l = *outcome.last;
    if (l.lower == l.upper)
      out << "last: S_" << l.n << " = " << with_approx(l.lower) << "\n";
    else
      out << "last: S_" << l.n << " in [" << to_decimal(l.lower) << ", " << to_decimal(l.upper) << "]\n";
  }
  if (!q && !outcome.windows.empty()) {
    const bool all_at_k = std::all_of(outcome.windows.begin(), outcome.windows.end(),
                                      [](const WindowWitness& w) { return w.n == w.k; });
    out << "accepted windows: " << outcome.windows.size() << " rounds"
        << (all_at_k ? ", every round accepted N = k (single-point window)" : "") << "\n";
  }
  return out.str();
}

}  // namespace hs
