#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hs {

using Natural = mpz_class;
using Rational = mpq_class;

/// Parses `p/q` or an integer, optionally signed. The result is canonical
/// (lowest terms, positive denominator). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Parses a non-negative decimal integer. Throws std::invalid_argument.
Natural parse_natural(std::string_view text);

/// Exact text form: `p` for integers, `p/q` otherwise, always lowest terms.
std::string to_string(const Rational& value);
std::string to_string(const Natural& value);

/// Decimal approximation with `digits` significant digits. Output is a pure
/// function of the exact value.
std::string to_decimal(const Rational& value, int digits = 12);

/// Exact text if it fits in `max_chars`, else `<D-digit numerator>/<...>` plus
/// the decimal approximation. Used by human-readable reports only.
std::string abbreviate(const Rational& value, std::size_t max_chars = 64);

Rational pow(const Rational& base, unsigned long exponent);

/// 2^-exponent as an exact rational.
Rational inverse_power_of_two(unsigned long exponent);

}  // namespace hs
