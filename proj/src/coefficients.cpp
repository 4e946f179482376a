#include "haltseries/coefficients.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <stdexcept>

namespace hs {

namespace detail {

/// One resumable run per stream. Queries for a_0..a_N cost N steps in total.
struct HaltingMemo {
  HaltingMemo(const MachineProgram& program, const Natural& input) : execution(program, input) {}

  bool halted_by(Index n) {
    std::lock_guard lock(mutex);
    if (!execution.halted() && execution.steps() < n) execution.run_until(n);
    return execution.halted() && execution.steps() <= n;
  }

  std::mutex mutex;
  Execution execution;
};

}  // namespace detail

namespace {

std::string normalize(std::string_view name) {
  std::string out;
  for (char c : name)
    if (c != '-' && c != '_') out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Rational builtin_at(const Builtin& b, Index n) {
  switch (b.id) {
    case BuiltinId::Zero: return 0;
    case BuiltinId::One: return 1;
    case BuiltinId::Harmonic: return Rational(1, Natural(static_cast<unsigned long>(n + 1)));
    case BuiltinId::Alternating: return n % 2 == 0 ? 1 : -1;
    case BuiltinId::ReciprocalFactorial: return Rational(1, factorial(n));
    case BuiltinId::FactorialTail: return n < b.n0 ? Rational(0) : Rational(factorial(n));
    case BuiltinId::Geometric: return pow(b.ratio, static_cast<unsigned long>(n));
  }
  return 0;
}

}  // namespace

Natural factorial(Index n) {
  Natural out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

std::string builtin_name(BuiltinId id) {
  switch (id) {
    case BuiltinId::Zero: return "zero";
    case BuiltinId::One: return "one";
    case BuiltinId::Harmonic: return "harmonic";
    case BuiltinId::Alternating: return "alternating";
    case BuiltinId::ReciprocalFactorial: return "reciprocal-factorial";
    case BuiltinId::FactorialTail: return "factorial-tail";
    case BuiltinId::Geometric: return "geometric";
  }
  return "?";
}

CoefficientStream::CoefficientStream(Kind kind) : kind_(std::move(kind)) {
  if (const auto* h = std::get_if<HaltingEncoded>(&kind_))
    memo_ = std::make_shared<detail::HaltingMemo>(h->program, h->input);
}

CoefficientStream CoefficientStream::halting(MachineProgram program, Natural input) {
  if (sgn(input) < 0) throw std::invalid_argument("input must be a natural number");
  return CoefficientStream(HaltingEncoded{std::move(program), std::move(input)});
}

CoefficientStream CoefficientStream::builtin(Builtin builtin) { return CoefficientStream(std::move(builtin)); }

CoefficientStream CoefficientStream::explicit_sequence(std::vector<Rational> prefix, Rational tail) {
  return CoefficientStream(ExplicitSequence{std::move(prefix), std::move(tail)});
}

bool CoefficientStream::halted_by(Index n) const {
  if (!memo_) throw std::logic_error("halted_by() on a stream that is not halting-encoded");
  return memo_->halted_by(n);
}

Rational CoefficientStream::at(Index n) const {
  if (memo_) return memo_->halted_by(n) ? Rational(factorial(n)) : Rational(0);
  if (const auto* b = std::get_if<Builtin>(&kind_)) return builtin_at(*b, n);
  const auto& e = std::get<ExplicitSequence>(kind_);
  return n < e.prefix.size() ? e.prefix[n] : e.tail;
}

bool CoefficientStream::is_zero_at(Index n) const {
  if (memo_) return !memo_->halted_by(n);
  if (const auto* b = std::get_if<Builtin>(&kind_)) {
    switch (b->id) {
      case BuiltinId::Zero: return true;
      case BuiltinId::FactorialTail: return n < b->n0;
      case BuiltinId::Geometric: return b->ratio == 0 && n > 0;
      default: return false;
    }
  }
  return at(n) == 0;
}

CoefficientCursor CoefficientStream::cursor() const { return CoefficientCursor(*this); }

std::string CoefficientStream::describe() const {
  if (const auto* h = std::get_if<HaltingEncoded>(&kind_))
    return "halting(" + std::to_string(h->program.size()) + " instructions, input " + h->input.get_str() + ")";
  if (const auto* b = std::get_if<Builtin>(&kind_)) {
    std::string out = builtin_name(b->id);
    if (b->id == BuiltinId::FactorialTail) out += "(" + std::to_string(b->n0) + ")";
    if (b->id == BuiltinId::Geometric) out += "(" + to_string(b->ratio) + ")";
    return out;
  }
  const auto& e = std::get<ExplicitSequence>(kind_);
  std::string out = "explicit(";
  for (const auto& v : e.prefix) out += to_string(v) + " ";
  return out + "| tail " + to_string(e.tail) + ")";
}

CoefficientCursor::CoefficientCursor(CoefficientStream stream) : stream_(std::move(stream)) {}

const Natural& CoefficientCursor::factorial_of(Index n) {
  if (n == factorial_index_ + 1)
    factorial_ *= static_cast<unsigned long>(n);
  else if (n != factorial_index_)
    factorial_ = factorial(n);
  factorial_index_ = n;
  return factorial_;
}

Rational CoefficientCursor::next() {
  const Index n = index_;
  Rational value;
  const auto& kind = stream_.kind();
  if (std::holds_alternative<HaltingEncoded>(kind)) {
    value = stream_.halted_by(n) ? Rational(factorial_of(n)) : Rational(0);
  } else if (const auto* b = std::get_if<Builtin>(&kind)) {
    switch (b->id) {
      case BuiltinId::ReciprocalFactorial: value = Rational(1, factorial_of(n)); break;
      case BuiltinId::FactorialTail: value = n < b->n0 ? Rational(0) : Rational(factorial_of(n)); break;
      case BuiltinId::Geometric:
        value = power_;
        power_ *= b->ratio;
        break;
      default: value = stream_.at(n);
    }
  } else {
    value = stream_.at(n);
  }
  ++index_;
  return value;
}

CoefficientStream halting_coefficients(const MachineProgram& program, const Natural& input) {
  return CoefficientStream::halting(program, input);
}

CoefficientStream builtin_stream(std::string_view name, std::span<const Rational> params) {
  static const std::pair<const char*, BuiltinId> kNames[] = {
      {"zero", BuiltinId::Zero},
      {"one", BuiltinId::One},
      {"harmonic", BuiltinId::Harmonic},
      {"alternating", BuiltinId::Alternating},
      {"reciprocalfactorial", BuiltinId::ReciprocalFactorial},
      {"factorialtail", BuiltinId::FactorialTail},
      {"geometric", BuiltinId::Geometric},
  };
  const std::string key = normalize(name);
  auto it = std::find_if(std::begin(kNames), std::end(kNames), [&](const auto& p) { return key == p.first; });
  if (it == std::end(kNames)) throw std::invalid_argument("unknown builtin '" + std::string(name) + "'");

  Builtin b{it->second};
  const std::size_t arity = (b.id == BuiltinId::FactorialTail || b.id == BuiltinId::Geometric) ? 1 : 0;
  if (params.size() != arity)
    throw std::invalid_argument("builtin '" + builtin_name(b.id) + "' takes " + std::to_string(arity) +
                                " parameter(s), got " + std::to_string(params.size()));
  if (b.id == BuiltinId::FactorialTail) {
    const Rational& n0 = params[0];
    if (n0.get_den() != 1 || sgn(n0) < 0 || !n0.get_num().fits_ulong_p())
      throw std::invalid_argument("factorial-tail: n0 must be a natural number, got " + to_string(n0));
    b.n0 = n0.get_num().get_ui();
  }
  if (b.id == BuiltinId::Geometric) b.ratio = params[0];
  return CoefficientStream::builtin(std::move(b));
}

}  // namespace hs
