#include "haltseries/rational.hpp"

#include <gmp.h>

#include <cctype>
#include <stdexcept>
#include <vector>

namespace hs {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string_view strip_sign(std::string_view s, bool& negative) {
  negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return s;
}

}  // namespace

Natural parse_natural(std::string_view text) {
  if (!all_digits(text)) throw std::invalid_argument("not a natural number: '" + std::string(text) + "'");
  return Natural(std::string(text), 10);
}

Rational parse_rational(std::string_view text) {
  bool negative = false;
  std::string_view body = strip_sign(text, negative);
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  Natural d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational q(Natural(std::string(num), 10), d);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Natural& value) { return value.get_str(10); }

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str(10);
  return value.get_num().get_str(10) + "/" + value.get_den().get_str(10);
}

std::string to_decimal(const Rational& value, int digits) {
  if (value == 0) return "0";
  // Enough binary precision for `digits` significant decimals plus slack.
  mpf_class f(value, static_cast<mp_bitcnt_t>(digits * 4 + 64));
  int len = gmp_snprintf(nullptr, 0, "%.*Fg", digits, f.get_mpf_t());
  std::vector<char> buf(static_cast<std::size_t>(len) + 1);
  gmp_snprintf(buf.data(), buf.size(), "%.*Fg", digits, f.get_mpf_t());
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

std::string abbreviate(const Rational& value, std::size_t max_chars) {
  std::string exact = to_string(value);
  if (exact.size() <= max_chars) return exact;
  std::string out = "<" + std::to_string(value.get_num().get_str(10).size() - (value < 0 ? 1 : 0)) + "-digit numerator";
  if (value.get_den() != 1) out += ", " + std::to_string(value.get_den().get_str(10).size()) + "-digit denominator";
  return out + ">";
}

Rational pow(const Rational& base, unsigned long exponent) {
  Natural num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  // Powers of coprime integers stay coprime, so no canonicalize is needed.
  Rational out;
  mpz_swap(out.get_num().get_mpz_t(), num.get_mpz_t());
  mpz_swap(out.get_den().get_mpz_t(), den.get_mpz_t());
  return out;
}

Rational inverse_power_of_two(unsigned long exponent) {
  Rational out(1);
  mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), exponent);
  return out;
}

}  // namespace hs
