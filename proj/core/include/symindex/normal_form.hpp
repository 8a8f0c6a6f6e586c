#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symindex/exact_angle.hpp"

namespace symindex {

// N1(lambda, b) = [[lambda, b], [0, lambda]] with lambda = +-1 and b in
// {-1, 0, 1}; b = 0 gives +-I_2.
struct N1Block {
  int lambda = 1;
  int b = 0;
};

// Realized as D(2) = diag(2, 1/2). Every hyperbolic block is inert for the
// index formulas, so one representative covers them all.
struct HyperbolicBlock {};

// R(theta), angle = theta / 2pi in (0, 1) \ {1/2}.
struct RotationBlock {
  ExactAngle angle;
};

// N2(e^{i theta}, B): only the (non)triviality of B enters the index theory.
struct N2Block {
  ExactAngle angle;
  bool trivial = false;
};

using BasicForm = std::variant<N1Block, HyperbolicBlock, RotationBlock, N2Block>;

BasicForm make_n1(int lambda, int b);
BasicForm make_hyperbolic();
BasicForm make_rotation(const ExactAngle& angle);
BasicForm make_n2(const ExactAngle& angle, bool trivial);

int block_dimension(const BasicForm& block);
std::string describe(const BasicForm& block);

// Block counts of a normal-form decomposition. The *_rational fields count
// the blocks among r, r_star, r_zero whose angle is rational.
struct Census {
  int p_minus = 0;  // N1(1, 1)
  int p_zero = 0;   // I_2
  int p_plus = 0;   // N1(1, -1)
  int q_minus = 0;  // N1(-1, 1)
  int q_zero = 0;   // -I_2
  int q_plus = 0;   // N1(-1, -1)
  int r = 0;        // R(theta)
  int r_star = 0;   // nontrivial N2
  int r_zero = 0;   // trivial N2
  int h = 0;        // hyperbolic
  int r_rational = 0;
  int r_star_rational = 0;
  int r_zero_rational = 0;

  // Half the total dimension, n - 1 for a valid decomposition.
  int half_dimension() const {
    return p_minus + p_zero + p_plus + q_minus + q_zero + q_plus + r + 2 * r_star + 2 * r_zero + h;
  }
  bool operator==(const Census&) const = default;
};

class Decomposition {
 public:
  // Throws InvalidInput unless the blocks fill exactly 2(n - 1) dimensions.
  Decomposition(int n, std::vector<BasicForm> blocks);

  int n() const { return n_; }
  int dimension() const { return 2 * (n_ - 1); }
  const std::vector<BasicForm>& blocks() const { return blocks_; }
  const Census& census() const { return census_; }

  // Angles of the R blocks, rational ones first, input order otherwise.
  const std::vector<ExactAngle>& rotation_angles() const { return theta_; }
  const std::vector<ExactAngle>& nontrivial_n2_angles() const { return alpha_; }
  const std::vector<ExactAngle>& trivial_n2_angles() const { return beta_; }

  // Blocks sorted into the standard presentation order: N1(1,1), I, N1(1,-1),
  // N1(-1,1), -I, N1(-1,-1), nontrivial N2, trivial N2, rational R,
  // irrational R, hyperbolic.
  std::vector<BasicForm> canonical_blocks() const;

 private:
  int n_;
  std::vector<BasicForm> blocks_;
  Census census_;
  std::vector<ExactAngle> theta_;
  std::vector<ExactAngle> alpha_;
  std::vector<ExactAngle> beta_;
};

// The diamond sum: block k's upper-left quadrant goes to the upper-left
// quadrant of the result, and so on, interleaved in block order.
Eigen::MatrixXd diamond_sum(std::span<const Eigen::MatrixXd> blocks);

Eigen::MatrixXd block_matrix(const BasicForm& block, double precision = 1e-12);

// A symplectic matrix with the given normal form. Irrational angles are
// refined until their enclosure is narrower than `precision`.
Eigen::MatrixXd realize(const Decomposition& d, double precision = 1e-12);

// J = [[0, -I], [I, 0]] of size dim.
Eigen::MatrixXd standard_symplectic_form(int dim);

int elliptic_height(const Decomposition& d);

enum class Stability { elliptic, hyperbolic, neither };

struct Classification {
  Stability stability = Stability::neither;
  bool degenerate = false;
  bool operator==(const Classification&) const = default;
};

Classification classify(const Decomposition& d);
std::string to_string(Stability s);

int splitting_plus_at_one(const Decomposition& d);
int c_total(const Decomposition& d);

// A point omega = e^{2 pi i t} of the unit circle.
class SpectralPoint {
 public:
  static SpectralPoint one();
  static SpectralPoint minus_one();
  static SpectralPoint at(const ExactAngle& angle);
  // t in [0, 1); anything else does not name a point of the circle.
  static SpectralPoint from_turns(const Rational& t);

  bool is_one() const { return kind_ == Kind::one; }
  bool is_minus_one() const { return kind_ == Kind::minus_one; }
  const ExactAngle* angle() const { return angle_ ? &*angle_ : nullptr; }
  std::string describe() const;

 private:
  enum class Kind { one, minus_one, angle };
  explicit SpectralPoint(Kind kind, std::optional<ExactAngle> angle = std::nullopt)
      : kind_(kind), angle_(std::move(angle)) {}
  Kind kind_;
  std::optional<ExactAngle> angle_;
};

struct SplittingPair {
  int plus = 0;
  int minus = 0;
  bool operator==(const SplittingPair&) const = default;
};

SplittingPair splitting_numbers(const BasicForm& block, const SpectralPoint& omega);

// Points of the unit circle other than 1 at which the block has an
// eigenvalue (-1 for the q-type blocks, e^{+-i theta} for R and N2).
std::vector<SpectralPoint> circle_spectrum(const BasicForm& block);

}  // namespace symindex
