#include "symindex/exact_angle.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "symindex/errors.hpp"

namespace symindex {

namespace {

std::atomic<int> g_budget{64};

constexpr int kQuadraticBaseBits = 64;
constexpr std::int64_t kFastPathLimit = std::int64_t{1} << 50;

// Largest s with s^2 | d, found by trial division while the cofactor stays
// small enough; returns (s, d / s^2).
std::pair<Integer, Integer> split_square(Integer d) {
  Integer s = 1;
  for (Integer f = 2; f * f <= d && f < 2000000; ++f) {
    Integer ff = f * f;
    while (d % ff == 0) {
      d /= ff;
      s *= f;
    }
  }
  return {s, d};
}

bool perfect_square(const Integer& d) { return mpz_perfect_square_p(d.get_mpz_t()) != 0; }

ExactAngle::QuadraticForm canonical(Integer a, Integer b, Integer c, Integer d) {
  if (c < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  auto [s, rest] = split_square(d);
  b *= s;
  d = rest;
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g > 1) {
    a /= g;
    b /= g;
    c /= g;
  }
  return {a, b, c, d};
}

Interval quadratic_enclosure(const ExactAngle::QuadraticForm& f, int step) {
  const unsigned long bits = static_cast<unsigned long>(kQuadraticBaseBits + step);
  Integer scaled = f.d << (2 * bits);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Integer denom = Integer(1) << bits;
  Rational sqrt_lo(root, denom);
  Rational sqrt_hi(root + 1, denom);
  sqrt_lo.canonicalize();
  sqrt_hi.canonicalize();
  Rational x1 = (Rational(f.a) + Rational(f.b) * sqrt_lo) / Rational(f.c);
  Rational x2 = (Rational(f.a) + Rational(f.b) * sqrt_hi) / Rational(f.c);
  if (x2 < x1) std::swap(x1, x2);
  return {x1, x2};
}

double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

std::string angle_label(const ExactAngle& x) { return x.describe(); }

}  // namespace

int refinement_budget() { return g_budget.load(std::memory_order_relaxed); }

void set_refinement_budget(int budget) {
  if (budget < 0) throw InvalidInput("refinement budget must be non-negative");
  g_budget.store(budget, std::memory_order_relaxed);
}

struct ExactAngle::Source {
  Interval base;
  Refiner refiner;
  std::optional<QuadraticForm> form;
  bool enclosed_input = false;

  mutable std::mutex mutex;
  mutable std::vector<std::unique_ptr<Interval>> cache;  // cache[s - 1] holds step s

  int max_step() const { return refiner ? std::numeric_limits<int>::max() : 0; }

  const Interval& at(int step) const {
    if (step <= 0 || !refiner) return base;
    std::lock_guard lock(mutex);
    while (static_cast<int>(cache.size()) < step) {
      int s = static_cast<int>(cache.size()) + 1;
      Interval next = refiner(s);
      // Keep enclosures nested so readers only ever see them tighten.
      const Interval& prev = cache.empty() ? base : *cache.back();
      if (next.lo < prev.lo) next.lo = prev.lo;
      if (next.hi > prev.hi) next.hi = prev.hi;
      if (next.hi < next.lo) next = prev;
      cache.push_back(std::make_unique<Interval>(std::move(next)));
    }
    return *cache[static_cast<std::size_t>(step) - 1];
  }
};

ExactAngle::ExactAngle(std::shared_ptr<const Source> source, bool mirrored)
    : source_(std::move(source)), mirrored_(mirrored) {
  Interval e = raw_enclosure(0);
  lo_d_ = down(e.lo.get_d());
  hi_d_ = up(e.hi.get_d());
}

ExactAngle ExactAngle::rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw InvalidInput("angle with zero denominator");
  return rational(make_rational(p, q));
}

ExactAngle ExactAngle::rational(const Rational& x) {
  if (x <= 0 || x >= 1)
    throw InvalidInput("rational angle " + format_exact(x) + " must lie strictly between 0 and 1");
  if (!x.get_num().fits_slong_p() || !x.get_den().fits_slong_p())
    throw InvalidInput("rational angle " + format_exact(x) + " exceeds 64-bit numerator/denominator");
  ExactAngle angle;
  angle.value_ = x;
  angle.p_ = x.get_num().get_si();
  angle.q_ = x.get_den().get_si();
  angle.lo_d_ = down(x.get_d());
  angle.hi_d_ = up(x.get_d());
  return angle;
}

ExactAngle ExactAngle::quadratic(const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
  if (c == 0) throw InvalidInput("quadratic angle with c = 0");
  if (d <= 0) throw InvalidInput("quadratic angle needs d > 0");
  if (b == 0 || perfect_square(d))
    throw InvalidInput("quadratic angle (a + b sqrt(d)) / c is rational; encode it as a rational angle");
  auto source = std::make_shared<Source>();
  source->form = canonical(a, b, c, d);
  source->base = quadratic_enclosure(*source->form, 0);
  QuadraticForm f = *source->form;
  source->refiner = [f](int step) { return quadratic_enclosure(f, step); };

  // Irrational, so refinement eventually separates it from 0 and 1.
  for (int s = 0; s <= 4096; ++s) {
    const Interval& e = source->at(s);
    if (e.lo > 0 && e.hi < 1) break;
    if (e.hi <= 0 || e.lo >= 1) {
      std::ostringstream os;
      os << "quadratic angle (" << a << " + " << b << " sqrt(" << d << ")) / " << c << " lies outside (0, 1)";
      throw InvalidInput(os.str());
    }
  }
  return ExactAngle(std::move(source), false);
}

ExactAngle ExactAngle::enclosed(const Rational& approx, const Rational& error, Refiner refiner) {
  if (error <= 0) throw InvalidInput("enclosed angle needs a positive error bound");
  Interval base(approx - error, approx + error);
  if (base.lo <= 0 || base.hi >= 1)
    throw InvalidInput("enclosure [" + format_exact(base.lo) + ", " + format_exact(base.hi) +
                       "] of an irrational angle must lie strictly inside (0, 1)");
  auto source = std::make_shared<Source>();
  source->base = base;
  source->refiner = std::move(refiner);
  source->enclosed_input = true;
  return ExactAngle(std::move(source), false);
}

const Rational& ExactAngle::exact_value() const {
  if (!is_rational()) throw InvalidInput("exact_value() on an irrational angle");
  return value_;
}

Interval ExactAngle::raw_enclosure(int step) const {
  const Interval& e = source_->at(step);
  if (!mirrored_) return e;
  return {1 - e.hi, 1 - e.lo};
}

Interval ExactAngle::enclosure(int step) const {
  if (is_rational()) return Interval(value_);
  return raw_enclosure(step);
}

int ExactAngle::max_step() const { return is_rational() ? 0 : source_->max_step(); }

ExactAngle ExactAngle::conjugate() const {
  if (is_rational()) return rational(1 - value_);
  return ExactAngle(source_, !mirrored_);
}

std::optional<ExactAngle::QuadraticForm> ExactAngle::quadratic_form() const {
  if (is_rational() || !source_->form) return std::nullopt;
  if (!mirrored_) return *source_->form;
  const QuadraticForm& f = *source_->form;
  return canonical(f.c - f.a, -f.b, f.c, f.d);
}

bool ExactAngle::is_enclosed_input() const { return !is_rational() && source_->enclosed_input; }

bool ExactAngle::same_value(const ExactAngle& other, int budget) const {
  if (is_rational() != other.is_rational()) return false;
  if (is_rational()) return value_ == other.value_;
  if (source_ == other.source_) return mirrored_ == other.mirrored_;
  if (source_->form && other.source_->form) {
    return *quadratic_form() == *other.quadratic_form();
  }
  int limit = std::min({budget, max_step(), other.max_step()});
  for (int s = 0; s <= limit; ++s) {
    Interval a = enclosure(s);
    Interval b = other.enclosure(s);
    if (a.hi < b.lo || b.hi < a.lo) return false;
  }
  throw Undecidable("cannot decide whether angles " + describe() + " and " + other.describe() +
                    " coincide within the refinement budget");
}

double ExactAngle::approx() const {
  if (is_rational()) return value_.get_d();
  return enclosure(0).midpoint().get_d();
}

std::string ExactAngle::describe() const {
  if (is_rational()) return format_exact(value_);
  if (auto f = quadratic_form()) {
    std::ostringstream os;
    os << "(" << f->a << (f->b < 0 ? " - " : " + ") << abs(f->b) << "*sqrt(" << f->d << "))/" << f->c;
    return os.str();
  }
  std::ostringstream os;
  os << "~" << format_decimal(enclosure(0).midpoint(), 12) << (mirrored_ ? " (conjugate)" : "");
  return os.str();
}

namespace {

void require_positive(std::int64_t m) {
  if (m < 1) throw InvalidInput("multiplier m must be >= 1, got " + std::to_string(m));
}

std::int64_t rational_floor(std::int64_t p, std::int64_t q, std::int64_t m) {
  __int128 prod = static_cast<__int128>(p) * m;
  __int128 f = prod / q;
  if (prod % q != 0 && prod < 0) --f;
  return static_cast<std::int64_t>(f);
}

bool rational_divides(std::int64_t p, std::int64_t q, std::int64_t m) {
  return (static_cast<__int128>(p) * m) % q == 0;
}

// Certified floor from outward-rounded double bounds; nullopt when the
// doubles cannot decide.
std::optional<std::int64_t> fast_floor(double lo_d, double hi_d, std::int64_t m) {
  if (m >= kFastPathLimit) return std::nullopt;
  constexpr double slack = 1.0 / static_cast<double>(std::int64_t{1} << 50);
  const double md = static_cast<double>(m);
  double a = md * lo_d * (1.0 - slack);
  double b = md * hi_d * (1.0 + slack);
  double fa = std::floor(a);
  if (fa + 1.0 >= b) return static_cast<std::int64_t>(fa);
  return std::nullopt;
}

}  // namespace

std::int64_t floor_mul(const ExactAngle& x, std::int64_t m, int budget) {
  require_positive(m);
  if (x.is_rational()) return rational_floor(x.numerator(), x.denominator(), m);

  if (auto f = fast_floor(x.lower_bound_d(), x.upper_bound_d(), m)) return *f;

  const int limit = std::min(budget, x.max_step());
  for (int s = 0; s <= limit; ++s) {
    Interval e = x.enclosure(s);
    Rational a = e.lo * m;
    Rational b = e.hi * m;
    Integer k = floor_of(a);
    if (k + 1 >= b) return to_int64(k);
  }
  throw Undecidable("cannot separate " + std::to_string(m) + " * " + angle_label(x) +
                    " from the integers within " + std::to_string(limit) + " refinements");
}

std::int64_t ceil_mul(const ExactAngle& x, std::int64_t m, int budget) {
  require_positive(m);
  if (x.is_rational()) {
    std::int64_t f = rational_floor(x.numerator(), x.denominator(), m);
    return rational_divides(x.numerator(), x.denominator(), m) ? f : f + 1;
  }
  return floor_mul(x, m, budget) + 1;
}

int varphi_mul(const ExactAngle& x, std::int64_t m, int budget) {
  (void)budget;
  require_positive(m);
  if (x.is_rational()) return rational_divides(x.numerator(), x.denominator(), m) ? 0 : 1;
  return 1;
}

Interval frac_mul(const ExactAngle& x, std::int64_t m, const Rational& tolerance, int budget) {
  require_positive(m);
  if (x.is_rational()) {
    Rational v = x.exact_value() * m;
    return Interval(v - floor_of(v));
  }
  if (tolerance <= 0) throw InvalidInput("frac_mul tolerance must be positive");
  const int limit = std::min(budget, x.max_step());
  for (int s = 0; s <= limit; ++s) {
    Interval e = x.enclosure(s);
    Rational a = e.lo * m;
    Rational b = e.hi * m;
    Integer k = floor_of(a);
    if (k + 1 >= b && b - a <= tolerance) return {a - k, b - k};
  }
  throw Undecidable("cannot enclose {" + std::to_string(m) + " * " + angle_label(x) + "} to width " +
                    format_exact(tolerance) + " within " + std::to_string(limit) + " refinements");
}

int compare_mul(const ExactAngle& x, std::int64_t m, const Rational& r, int budget) {
  require_positive(m);
  if (x.is_rational()) {
    Rational v = x.exact_value() * m;
    return v < r ? -1 : (v > r ? 1 : 0);
  }
  const int limit = std::min(budget, x.max_step());
  for (int s = 0; s <= limit; ++s) {
    Interval e = x.enclosure(s);
    int sign = e.scaled(Rational(m)).sign_against(r);
    // An irrational m x never equals r, so touching endpoints decide too.
    if (sign == kStraddles) {
      if (e.lo * m == r) return 1;
      if (e.hi * m == r) return -1;
      continue;
    }
    return sign;
  }
  throw Undecidable("cannot compare " + std::to_string(m) + " * " + angle_label(x) + " with " + format_exact(r) +
                    " within " + std::to_string(limit) + " refinements");
}

}  // namespace symindex
