#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "symindex/rational.hpp"

namespace symindex {

// Number of enclosure refinements certified arithmetic may request before it
// gives up with Undecidable. Process-wide; defaults to 64.
int refinement_budget();
void set_refinement_budget(int budget);

// Maps a refinement step s >= 1 to an enclosure of the same number whose
// width is at most 2^-s times the width at step 0.
using Refiner = std::function<Interval(int step)>;

// A rotation angle stored as the dimensionless ratio x = theta / (2 pi),
// 0 < x < 1.
//
// Rational angles are exact p/q in lowest terms. Irrational angles are held
// as a sequence of tightening rational enclosures; their irrationality is
// trusted input, which is what makes comparisons against rationals
// decidable (m * x is never an integer). Copies share one refinement cache,
// guarded internally, so an ExactAngle can be read from several threads.
class ExactAngle {
 public:
  static ExactAngle rational(std::int64_t p, std::int64_t q);
  static ExactAngle rational(const Rational& x);

  // (a + b sqrt(d)) / c with d not a perfect square. Refines by integer
  // square roots of d * 4^k, so every enclosure endpoint is dyadic.
  static ExactAngle quadratic(const Integer& a, const Integer& b, const Integer& c, const Integer& d);

  // An irrational number known only through |x - approx| <= error, with an
  // optional refiner. Without a refiner the enclosure never tightens.
  static ExactAngle enclosed(const Rational& approx, const Rational& error, Refiner refiner = {});

  bool is_rational() const { return source_ == nullptr; }
  const Rational& exact_value() const;  // rational flavor only
  std::int64_t numerator() const { return p_; }
  std::int64_t denominator() const { return q_; }

  // Enclosure after `step` refinements (clamped to max_step()).
  Interval enclosure(int step = 0) const;
  int max_step() const;

  // The angle 1 - x, i.e. the complex conjugate eigenvalue.
  ExactAngle conjugate() const;

  // Same real number. Decided exactly for rationals, for quadratic
  // irrationals (canonical form), and for two views of one source; other
  // irrational pairs are decided by separating enclosures, else Undecidable.
  bool same_value(const ExactAngle& other, int budget = refinement_budget()) const;

  double approx() const;
  std::string describe() const;

  // Quadratic parameters (a, b, c, d) when the angle came from quadratic().
  struct QuadraticForm {
    Integer a, b, c, d;
    bool operator==(const QuadraticForm&) const = default;
  };
  std::optional<QuadraticForm> quadratic_form() const;

  // Outward-rounded double enclosure of the step-0 interval.
  double lower_bound_d() const { return lo_d_; }
  double upper_bound_d() const { return hi_d_; }

  // True for angles built with enclosed().
  bool is_enclosed_input() const;

 private:
  struct Source;

  ExactAngle() = default;
  ExactAngle(std::shared_ptr<const Source> source, bool mirrored);

  Interval raw_enclosure(int step) const;

  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
  Rational value_;
  std::shared_ptr<const Source> source_;
  bool mirrored_ = false;  // value is 1 - (source value)
  // Outward-rounded double bounds of the step-0 enclosure.
  double lo_d_ = 0.0;
  double hi_d_ = 0.0;
};

// [m x]. Throws Undecidable when the budget cannot separate m x from the
// integers.
std::int64_t floor_mul(const ExactAngle& x, std::int64_t m, int budget = refinement_budget());

// E(m x), the least integer >= m x.
std::int64_t ceil_mul(const ExactAngle& x, std::int64_t m, int budget = refinement_budget());

// 0 when m x is an integer, 1 otherwise.
int varphi_mul(const ExactAngle& x, std::int64_t m, int budget = refinement_budget());

// {m x}: exact for rational x; for irrational x an enclosure of width at
// most `tolerance`.
Interval frac_mul(const ExactAngle& x, std::int64_t m, const Rational& tolerance = Rational(1, 1000000000),
                  int budget = refinement_budget());

// Certified sign of m x - r (0 only when equal, which needs rational x).
int compare_mul(const ExactAngle& x, std::int64_t m, const Rational& r, int budget = refinement_budget());

}  // namespace symindex
