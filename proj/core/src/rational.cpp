#include "symindex/rational.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>

namespace symindex {

Rational make_rational(const Integer& p, const Integer& q) {
  if (q == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

namespace {

Integer pow10(unsigned long e) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), 10, e);
  return z;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  std::string owned(s.front() == '+' ? s.substr(1) : s);
  return Integer(owned, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
  }

  bool negative = false;
  std::string_view s = text;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    Integer ez = parse_integer(exp_text);
    if (!ez.fits_slong_p() || abs(ez) > 100000) throw std::invalid_argument("exponent out of range");
    exponent = ez.get_si();
    s = s.substr(0, e);
  }

  std::string digits;
  long frac_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    digits = std::string(whole) + std::string(frac);
    frac_digits = static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }

  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long scale = exponent - frac_digits;
  if (scale >= 0) return Rational(mantissa * pow10(static_cast<unsigned long>(scale)));
  return make_rational(mantissa, pow10(static_cast<unsigned long>(-scale)));
}

Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer ceil_of(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

std::string format_exact(const Rational& x) {
  Integer den = x.get_den();
  unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), Integer(2).get_mpz_t());
  unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), Integer(5).get_mpz_t());
  if (den != 1) return x.get_num().get_str() + "/" + x.get_den().get_str();
  if (x.get_den() == 1) return x.get_num().get_str();

  unsigned long places = std::max(twos, fives);
  Integer scaled = x.get_num() * pow10(places) / x.get_den();
  bool negative = scaled < 0;
  std::string body = Integer(abs(scaled)).get_str();
  if (body.size() <= places) body.insert(0, places - body.size() + 1, '0');
  body.insert(body.size() - places, ".");
  return negative ? "-" + body : body;
}

std::string format_decimal(const Rational& x, int digits) {
  Integer scale = pow10(static_cast<unsigned long>(digits));
  Rational shifted = x * scale;
  Integer rounded = floor_of(shifted + Rational(1, 2));
  bool negative = rounded < 0;
  std::string body = Integer(abs(rounded)).get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) body.insert(0, digits - body.size() + 1, '0');
    body.insert(body.size() - digits, ".");
  }
  return negative ? "-" + body : body;
}

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer " + z.get_str() + " exceeds 64 bits");
  return static_cast<std::int64_t>(z.get_si());
}

Interval::Interval(const Rational& lower, const Rational& upper) : lo(lower), hi(upper) {
  if (hi < lo) throw std::invalid_argument("interval with hi < lo");
}

int Interval::sign_against(const Rational& r) const {
  if (lo > r) return 1;
  if (hi < r) return -1;
  if (lo == r && hi == r) return 0;
  return kStraddles;
}

Interval Interval::scaled(const Rational& factor) const {
  if (factor >= 0) return {lo * factor, hi * factor};
  return {hi * factor, lo * factor};
}

std::string format_interval(const Interval& x, int digits) {
  if (x.exact()) return format_exact(x.lo);
  return "[" + format_decimal(x.lo, digits) + ", " + format_decimal(x.hi, digits) + "]";
}

}  // namespace symindex
