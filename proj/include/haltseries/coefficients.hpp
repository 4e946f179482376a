#pragma once

#include "haltseries/machine.hpp"
#include "haltseries/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hs {

using Index = std::uint64_t;

enum class BuiltinId {
  Zero,                 // a_n = 0
  One,                  // a_n = 1
  Harmonic,             // a_n = 1/(n+1)
  Alternating,          // a_n = (-1)^n
  ReciprocalFactorial,  // a_n = 1/n!
  FactorialTail,        // a_n = 0 for n < n0, n! otherwise
  Geometric,            // a_n = r^n
};

struct Builtin {
  BuiltinId id = BuiltinId::Zero;
  Index n0 = 0;        // FactorialTail only
  Rational ratio = 0;  // Geometric only
};

/// Coefficients of a program run: a_n = n! once the run has halted by step n.
struct HaltingEncoded {
  MachineProgram program;
  Natural input;
};

struct ExplicitSequence {
  std::vector<Rational> prefix;
  Rational tail;
};

namespace detail {
struct HaltingMemo;
}

class CoefficientCursor;

/// A computable sequence n -> a_n of exact rationals. Copies share the
/// interpreter memo of a halting-encoded stream; the memo is internally
/// synchronized, so a stream may be read from several threads.
class CoefficientStream {
 public:
  using Kind = std::variant<HaltingEncoded, Builtin, ExplicitSequence>;

  static CoefficientStream halting(MachineProgram program, Natural input);
  static CoefficientStream builtin(Builtin builtin);
  static CoefficientStream explicit_sequence(std::vector<Rational> prefix, Rational tail);

  Rational at(Index n) const;
  bool is_zero_at(Index n) const;

  /// Sequential reader a_0, a_1, ... with incremental factorials and powers.
  CoefficientCursor cursor() const;

  const Kind& kind() const noexcept { return kind_; }
  std::string describe() const;

  /// Halting-encoded streams only: whether the run has halted within n steps.
  /// Advances the shared memo at most to step n.
  bool halted_by(Index n) const;

 private:
  explicit CoefficientStream(Kind kind);

  Kind kind_;
  std::shared_ptr<detail::HaltingMemo> memo_;
};

class CoefficientCursor {
 public:
  explicit CoefficientCursor(CoefficientStream stream);

  /// Returns a_{index()} and advances.
  Rational next();
  Index index() const noexcept { return index_; }

 private:
  /// n!, reusing the previous value when n advances by one. Streams that never
  /// need a factorial never pay for one.
  const Natural& factorial_of(Index n);

  CoefficientStream stream_;
  Index index_ = 0;
  Natural factorial_ = 1;  // factorial_index_!
  Index factorial_index_ = 0;
  Rational power_ = 1;     // ratio^index_ for Geometric
};

CoefficientStream halting_coefficients(const MachineProgram& program, const Natural& input);

inline Rational coefficient_at(const CoefficientStream& stream, Index n) { return stream.at(n); }

/// Builds a builtin stream by name. Names are matched ignoring case, `-` and
/// `_` (`factorial-tail` == `FactorialTail`). Throws std::invalid_argument for
/// unknown names, wrong arity or invalid parameters.
CoefficientStream builtin_stream(std::string_view name, std::span<const Rational> params = {});

/// n! via GMP.
Natural factorial(Index n);

std::string builtin_name(BuiltinId id);

}  // namespace hs
