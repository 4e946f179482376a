#include "haltseries/series.hpp"

#include "haltseries/errors.hpp"
#include "haltseries/kernels.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace hs {
namespace {

// Ratio-test traces record S_N at N = 0, 1, 2, 4, ... up to this bound.
constexpr Index kRatioTraceLimit = 256;

bool is_trace_index(Index n) { return n <= kRatioTraceLimit && (n == 0 || (n & (n - 1)) == 0); }

Rational as_rational(Index value) { return Rational(Natural(static_cast<unsigned long>(value))); }

Index as_index(const Rational& value) { return value.get_num().get_ui(); }

}  // namespace

EvaluationPoint::EvaluationPoint(Rational r) : r_(std::move(r)) {
  if (sgn(r_) < 0) throw std::invalid_argument("evaluation point must be non-negative, got " + to_string(r_));
}

// ---------------------------------------------------------------------------
// RateFunction

RateFunction::RateFunction(Form form, Index a, Index b, std::vector<Entry> table)
    : form_(form), a_(a), b_(b), table_(std::move(table)) {}

RateFunction RateFunction::exp_tail() { return RateFunction(Form::ExpTail, 0, 0, {}); }
RateFunction RateFunction::constant(Index terms) { return RateFunction(Form::Constant, terms, 0, {}); }
RateFunction RateFunction::linear(Index slope, Index offset) { return RateFunction(Form::Linear, slope, offset, {}); }

RateFunction RateFunction::tabulated(std::vector<Entry> entries) {
  if (entries.empty()) throw std::invalid_argument("rate table is empty");
  std::map<std::string, std::vector<const Entry*>> by_radius;
  for (const auto& e : entries) {
    if (e.r_upper && sgn(*e.r_upper) < 0) throw std::invalid_argument("rate table: negative r bound");
    by_radius[e.r_upper ? to_string(*e.r_upper) : "*"].push_back(&e);
  }
  for (auto& [radius, group] : by_radius) {
    std::sort(group.begin(), group.end(), [](auto* x, auto* y) { return x->m < y->m; });
    for (std::size_t i = 1; i < group.size(); ++i)
      if (group[i]->terms < group[i - 1]->terms)
        throw std::invalid_argument("rate table: N decreases in m at r <= " + radius);
  }
  return RateFunction(Form::Table, 0, 0, std::move(entries));
}

std::optional<Index> RateFunction::evaluate(unsigned m, const Rational& r) const {
  switch (form_) {
    case Form::Constant: return a_;
    case Form::Linear: return a_ * m + b_;
    case Form::ExpTail: {
      if (sgn(r) < 0 || r > 1) return std::nullopt;
      const Rational target = inverse_power_of_two(m);
      Rational term = r;  // r^(N+1) / (N+1)!
      for (Index n = 0;; ++n) {
        if (2 * term < target) return n;
        term *= r;
        term /= static_cast<unsigned long>(n + 2);
      }
    }
    case Form::Table: {
      std::optional<Index> best;
      for (const auto& e : table_)
        if (e.m >= m && (!e.r_upper || *e.r_upper >= r) && (!best || e.terms < *best)) best = e.terms;
      return best;
    }
  }
  return std::nullopt;
}

Index RateFunction::operator()(unsigned m, const Rational& r) const {
  auto n = evaluate(m, r);
  if (!n) throw RateUndefined("rate " + describe() + " undefined at m=" + std::to_string(m) + ", r=" + to_string(r));
  return *n;
}

bool RateFunction::defined_at(unsigned m, const Rational& r) const { return evaluate(m, r).has_value(); }

std::string RateFunction::describe() const {
  switch (form_) {
    case Form::ExpTail: return "exptail";
    case Form::Constant: return "const:" + std::to_string(a_);
    case Form::Linear: return "linear:" + std::to_string(a_) + ":" + std::to_string(b_);
    case Form::Table: {
      std::string out = "table:";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(table_[i].m) + ":" + (table_[i].r_upper ? to_string(*table_[i].r_upper) : "*") + ":" +
               std::to_string(table_[i].terms);
      }
      return out;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Verdicts and witnesses

bool is_witness(const Verdict& verdict) { return !std::holds_alternative<ConsistentUpToBudget>(verdict); }

std::string verdict_name(const Verdict& verdict) {
  switch (verdict.index()) {
    case 0: return "WitnessedDivergence";
    case 1: return "WitnessedBoundViolation";
    default: return "ConsistentUpToBudget";
  }
}

std::string probe_kind_name(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::RatioTest: return "ratio";
    case ProbeKind::EffectiveCriterion: return "criterion";
    case ProbeKind::Modulus: return "modulus";
  }
  return "?";
}

const Rational& Witness::get(std::string_view name) const {
  for (const auto& [key, value] : values)
    if (key == name) return value;
  throw std::out_of_range("witness has no value '" + std::string(name) + "'");
}

std::optional<double> RootEstimateReport::implied_radius() const {
  if (limsup_proxy == 0.0) return std::nullopt;
  return 1.0 / limsup_proxy;
}

// ---------------------------------------------------------------------------
// Partial sums

std::vector<Rational> partial_sums(const CoefficientStream& stream, const EvaluationPoint& point, Index last) {
  std::vector<Rational> out;
  out.reserve(last + 1);
  auto cursor = stream.cursor();
  Rational power = 1;
  Rational sum = 0;
  Rational term;
  for (Index n = 0; n <= last; ++n) {
    term = cursor.next();
    if (term != 0) sum += term * power;
    out.push_back(sum);
    power *= point.r();
  }
  return out;
}

Rational partial_sum(const CoefficientStream& stream, const EvaluationPoint& point, Index terms) {
  auto cursor = stream.cursor();
  Rational power = 1;
  Rational sum = 0;
  Rational term;
  for (Index n = 0; n <= terms; ++n) {
    term = cursor.next();
    if (term != 0) sum += term * power;
    if (n < terms) power *= point.r();
  }
  return sum;
}

EffectiveSum effective_partial_sum(const CoefficientStream& stream, const EvaluationPoint& point, unsigned m,
                                   const RateFunction& rate) {
  const Index terms = rate(m, point.r());
  return {partial_sum(stream, point, terms), terms};
}

// ---------------------------------------------------------------------------
// Probes

SeriesProbeReport ratio_test_probe(const CoefficientStream& stream, const EvaluationPoint& point,
                                   const Rational& threshold, std::uint64_t budget) {
  if (threshold <= 1) throw std::invalid_argument("ratio test threshold must exceed 1");
  if (budget < 1) throw std::invalid_argument("ratio test budget must be at least 1");

  SeriesProbeReport report;
  report.kind = ProbeKind::RatioTest;
  report.budget_used = budget;

  auto cursor = stream.cursor();
  Rational current = cursor.next();
  Rational power = 1;
  Rational sum = current;
  report.trace.push_back({0, sum});

  std::optional<Index> candidate;
  Rational lhs, rhs;
  for (Index n = 0; n < budget; ++n) {
    Rational next = cursor.next();
    if (n + 1 <= kRatioTraceLimit) {
      power *= point.r();
      sum += next * power;
      if (is_trace_index(n + 1)) report.trace.push_back({n + 1, sum});
    }
    if (current != 0 && next != 0) {
      // |a_{n+1}| r >= threshold |a_n|, without forming the quotient.
      lhs = abs(next) * point.r();
      rhs = abs(current) * threshold;
      if (lhs >= rhs) {
        if (!candidate) candidate = n;
      } else {
        candidate.reset();
      }
    }
    current = std::move(next);
  }

  if (!candidate) {
    report.verdict = ConsistentUpToBudget{budget};
    return report;
  }
  const Index n = *candidate;
  Witness w;
  w.index = n;
  w.value = abs(stream.at(n + 1)) * point.r() / abs(stream.at(n));
  w.values = {{"ratio", w.value}, {"r", point.r()}, {"threshold", threshold}, {"scan_end", as_rational(budget)}};
  report.witness = std::move(w);
  report.verdict = WitnessedDivergence{n};
  return report;
}

RootEstimateReport root_estimate(const CoefficientStream& stream, Index n_max) {
  if (n_max < 1) throw std::invalid_argument("root_estimate needs n_max >= 1");
  std::vector<Rational> coefficients;
  coefficients.reserve(n_max + 1);
  auto cursor = stream.cursor();
  for (Index n = 0; n <= n_max; ++n) coefficients.push_back(cursor.next());
  const auto estimates = kernels::root_estimates(coefficients);

  RootEstimateReport report;
  report.entries.reserve(n_max);
  std::deque<Index> window;  // indices with decreasing estimates
  for (Index n = 1; n <= n_max; ++n) {
    while (!window.empty() && estimates[window.back()] <= estimates[n]) window.pop_back();
    window.push_back(n);
    const Index lo = (n + 1) / 2;
    while (window.front() < lo) window.pop_front();
    report.entries.push_back({n, estimates[n], estimates[window.front()]});
  }
  report.limsup_proxy = report.entries.back().trailing_max;
  return report;
}

SeriesProbeReport check_effective_criterion(const CoefficientStream& stream, const RateFunction& m_rate,
                                            const Rational& radius, unsigned k_max, Index n_budget) {
  if (sgn(radius) <= 0) throw std::invalid_argument("radius must be positive");

  std::vector<Rational> coefficients;
  coefficients.reserve(n_budget + 1);
  auto cursor = stream.cursor();
  for (Index n = 0; n <= n_budget; ++n) coefficients.push_back(cursor.next());
  const auto estimates = kernels::root_estimates(coefficients);

  const Rational inverse_radius = 1 / radius;
  std::vector<CriterionRow> rows;
  for (unsigned k = 0; k <= k_max; ++k)
    rows.push_back({k, m_rate(k, Rational(0)), inverse_radius + inverse_power_of_two(k)});

  SeriesProbeReport report;
  report.kind = ProbeKind::EffectiveCriterion;
  report.budget_used = n_budget;
  const auto hit = kernels::first_criterion_violation(coefficients, estimates, rows, n_budget);
  if (!hit) {
    report.verdict = ConsistentUpToBudget{n_budget};
    return report;
  }
  const CriterionRow& row = rows[hit->row];
  Witness w;
  w.index = hit->n;
  w.value = row.bound;
  w.values = {{"k", as_rational(row.k)},
              {"n", as_rational(hit->n)},
              {"radius", radius},
              {"bound", row.bound},
              {"abs_coefficient", abs(coefficients[hit->n])}};
  report.witness = std::move(w);
  report.verdict = WitnessedBoundViolation{"k=" + std::to_string(row.k) + " n=" + std::to_string(hit->n) +
                                           ": |a_n|^(1/n) >= 1/R + 2^-k"};
  return report;
}

std::vector<Index> modulus_samples(Index e) {
  std::vector<Index> out{e, 2 * e + 1};
  for (Index step : {1, 2, 4, 8, 16, 32, 64}) out.push_back(e + step);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SeriesProbeReport check_modulus(const CoefficientStream& stream, const EvaluationPoint& point,
                                const Rational& claimed_limit, const RateFunction& rate, unsigned n_max) {
  std::vector<ModulusRow> rows;
  Index last = 0;
  for (unsigned n = 0; n <= n_max; ++n) {
    rows.push_back({n, modulus_samples(rate(n, point.r()))});
    last = std::max(last, rows.back().samples.back());
  }
  const auto sums = partial_sums(stream, point, last);

  SeriesProbeReport report;
  report.kind = ProbeKind::Modulus;
  report.budget_used = last;
  for (const auto& row : rows) {
    const Index k = row.samples.front();
    if (report.trace.empty() || report.trace.back().n != k) report.trace.push_back({k, sums[k]});
  }

  const auto hit = kernels::first_modulus_violation(sums, claimed_limit, rows);
  if (!hit) {
    report.verdict = ConsistentUpToBudget{n_max};
    return report;
  }
  const unsigned n = rows[hit->row].n;
  Witness w;
  w.index = hit->k;
  w.value = abs(sums[hit->k] - claimed_limit);
  w.values = {{"n", as_rational(n)},
              {"k", as_rational(hit->k)},
              {"r", point.r()},
              {"limit", claimed_limit},
              {"partial_sum", sums[hit->k]},
              {"error", w.value},
              {"tolerance", inverse_power_of_two(n)}};
  report.witness = std::move(w);
  report.verdict = WitnessedBoundViolation{"n=" + std::to_string(n) + " k=" + std::to_string(hit->k) +
                                           ": |S_k - L| >= 2^-n"};
  return report;
}

bool recheck_witness(const CoefficientStream& stream, const SeriesProbeReport& report) {
  if (!report.witness || !is_witness(report.verdict)) return false;
  const Witness& w = *report.witness;
  switch (report.kind) {
    case ProbeKind::RatioTest: {
      const Rational a_n = coefficient_at(stream, w.index);
      const Rational a_next = coefficient_at(stream, w.index + 1);
      if (a_n == 0 || a_next == 0) return false;
      const Rational ratio = abs(a_next) * w.get("r") / abs(a_n);
      return ratio == w.value && ratio >= w.get("threshold");
    }
    case ProbeKind::EffectiveCriterion: {
      const Index n = as_index(w.get("n"));
      const Rational bound = 1 / w.get("radius") + inverse_power_of_two(as_index(w.get("k")));
      const Rational a_n = abs(coefficient_at(stream, n));
      return bound == w.get("bound") && a_n == w.get("abs_coefficient") && n >= 1 &&
             a_n >= pow(bound, static_cast<unsigned long>(n));
    }
    case ProbeKind::Modulus: {
      const Index k = as_index(w.get("k"));
      const Rational s_k = partial_sum(stream, EvaluationPoint(w.get("r")), k);
      const Rational error = abs(s_k - w.get("limit"));
      return s_k == w.get("partial_sum") && error == w.value &&
             error >= inverse_power_of_two(as_index(w.get("n")));
    }
  }
  return false;
}

}  // namespace hs
