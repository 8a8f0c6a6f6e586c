#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace symindex {

using Integer = mpz_class;
using Rational = mpq_class;

// Builds p/q in lowest terms. Throws std::invalid_argument on q == 0.
Rational make_rational(const Integer& p, const Integer& q);

// Accepts "p/q", "-3", "0.001", "1e-3", "2.5E+2". The result is exact: a
// decimal literal denotes the rational it spells, never a binary float.
Rational parse_rational(std::string_view text);

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);

// Exact textual form: a finite decimal when the denominator is 2^a 5^b,
// otherwise "p/q". parse_rational(format_exact(x)) == x always holds.
std::string format_exact(const Rational& x);

// Rounded decimal with `digits` fractional digits, for human-facing output.
std::string format_decimal(const Rational& x, int digits);

std::int64_t to_int64(const Integer& z);

// A closed interval [lo, hi] of rationals. Degenerate intervals stand for
// exactly known values.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  explicit Interval(const Rational& value) : lo(value), hi(value) {}
  Interval(const Rational& lower, const Rational& upper);

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }

  // Certified sign of (value - r): +1, -1, or 0 when the interval is the
  // exact point r. Returns nullopt-like 2 when the interval straddles r.
  int sign_against(const Rational& r) const;

  Interval operator+(const Interval& other) const { return {lo + other.lo, hi + other.hi}; }
  Interval operator-(const Interval& other) const { return {lo - other.hi, hi - other.lo}; }
  Interval operator+(const Rational& r) const { return {lo + r, hi + r}; }
  Interval scaled(const Rational& factor) const;

  bool operator==(const Interval& other) const { return lo == other.lo && hi == other.hi; }
};

inline constexpr int kStraddles = 2;

std::string format_interval(const Interval& x, int digits = 12);

}  // namespace symindex
