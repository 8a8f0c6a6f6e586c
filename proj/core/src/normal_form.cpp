#include "symindex/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symindex/errors.hpp"

namespace symindex {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_rotation_angle(const ExactAngle& angle, const char* what) {
  if (angle.is_rational() && angle.exact_value() == Rational(1, 2))
    throw InvalidInput(std::string(what) + " angle 1/2 is excluded; use the -I_2 block for eigenvalue -1");
}

int canonical_rank(const BasicForm& block) {
  return std::visit(overloaded{
                        [](const N1Block& b) {
                          if (b.lambda == 1) return b.b == 1 ? 0 : (b.b == 0 ? 1 : 2);
                          return b.b == 1 ? 3 : (b.b == 0 ? 4 : 5);
                        },
                        [](const HyperbolicBlock&) { return 10; },
                        [](const RotationBlock& r) { return r.angle.is_rational() ? 8 : 9; },
                        [](const N2Block& n) { return n.trivial ? 7 : 6; },
                    },
                    block);
}

double angle_as_double(const ExactAngle& angle, double precision) {
  if (angle.is_rational()) return angle.exact_value().get_d();
  Rational tol(precision);
  const int limit = std::min(refinement_budget(), angle.max_step());
  for (int s = 0; s <= limit; ++s) {
    Interval e = angle.enclosure(s);
    if (e.width() <= tol) return e.midpoint().get_d();
  }
  throw Undecidable("cannot resolve angle " + angle.describe() + " to precision " + std::to_string(precision));
}

Eigen::Matrix2d rotation2(double turns) {
  const double t = 2.0 * std::numbers::pi * turns;
  Eigen::Matrix2d r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

}  // namespace

BasicForm make_n1(int lambda, int b) {
  if (lambda != 1 && lambda != -1) throw InvalidInput("N1 eigenvalue must be +1 or -1");
  if (b < -1 || b > 1) throw InvalidInput("N1 off-diagonal entry must be -1, 0 or 1");
  return N1Block{lambda, b};
}

BasicForm make_hyperbolic() { return HyperbolicBlock{}; }

BasicForm make_rotation(const ExactAngle& angle) {
  check_rotation_angle(angle, "R");
  return RotationBlock{angle};
}

BasicForm make_n2(const ExactAngle& angle, bool trivial) {
  check_rotation_angle(angle, "N2");
  return N2Block{angle, trivial};
}

int block_dimension(const BasicForm& block) { return std::holds_alternative<N2Block>(block) ? 4 : 2; }

std::string describe(const BasicForm& block) {
  return std::visit(overloaded{
                        [](const N1Block& b) -> std::string {
                          if (b.b == 0) return b.lambda == 1 ? "I2" : "-I2";
                          return "N1(" + std::to_string(b.lambda) + "," + std::to_string(b.b) + ")";
                        },
                        [](const HyperbolicBlock&) -> std::string { return "D(2)"; },
                        [](const RotationBlock& r) -> std::string { return "R(" + r.angle.describe() + ")"; },
                        [](const N2Block& n) -> std::string {
                          return std::string(n.trivial ? "N2trivial(" : "N2(") + n.angle.describe() + ")";
                        },
                    },
                    block);
}

Decomposition::Decomposition(int n, std::vector<BasicForm> blocks) : n_(n), blocks_(std::move(blocks)) {
  if (n < 1) throw InvalidInput("dimension n must be >= 1");
  std::vector<ExactAngle> irrational_theta;
  for (const BasicForm& block : blocks_) {
    std::visit(overloaded{
                   [&](const N1Block& b) {
                     int& slot = b.lambda == 1 ? (b.b == 1 ? census_.p_minus : b.b == 0 ? census_.p_zero : census_.p_plus)
                                               : (b.b == 1 ? census_.q_minus : b.b == 0 ? census_.q_zero : census_.q_plus);
                     ++slot;
                   },
                   [&](const HyperbolicBlock&) { ++census_.h; },
                   [&](const RotationBlock& r) {
                     check_rotation_angle(r.angle, "R");
                     ++census_.r;
                     if (r.angle.is_rational()) {
                       ++census_.r_rational;
                       theta_.push_back(r.angle);
                     } else {
                       irrational_theta.push_back(r.angle);
                     }
                   },
                   [&](const N2Block& b) {
                     check_rotation_angle(b.angle, "N2");
                     if (b.trivial) {
                       ++census_.r_zero;
                       census_.r_zero_rational += b.angle.is_rational();
                       beta_.push_back(b.angle);
                     } else {
                       ++census_.r_star;
                       census_.r_star_rational += b.angle.is_rational();
                       alpha_.push_back(b.angle);
                     }
                   },
               },
               block);
  }
  theta_.insert(theta_.end(), irrational_theta.begin(), irrational_theta.end());
  if (census_.half_dimension() != n - 1) {
    throw InvalidInput("blocks span " + std::to_string(2 * census_.half_dimension()) + " dimensions but n = " +
                       std::to_string(n) + " requires 2(n-1) = " + std::to_string(2 * (n - 1)) +
                       " (p- + p0 + p+ + q- + q0 + q+ + r + 2r* + 2r0 + h must equal n - 1)");
  }
}

std::vector<BasicForm> Decomposition::canonical_blocks() const {
  std::vector<BasicForm> out = blocks_;
  std::stable_sort(out.begin(), out.end(),
                   [](const BasicForm& a, const BasicForm& b) { return canonical_rank(a) < canonical_rank(b); });
  return out;
}

Eigen::MatrixXd diamond_sum(std::span<const Eigen::MatrixXd> blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw InvalidInput("diamond sum needs square blocks");
    if (b.rows() % 2 != 0) throw InvalidInput("diamond sum needs even-dimensional blocks");
    total += b.rows();
  }
  const Eigen::Index half = total / 2;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(total, total);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    const Eigen::Index k = b.rows() / 2;
    out.block(offset, offset, k, k) = b.topLeftCorner(k, k);
    out.block(offset, half + offset, k, k) = b.topRightCorner(k, k);
    out.block(half + offset, offset, k, k) = b.bottomLeftCorner(k, k);
    out.block(half + offset, half + offset, k, k) = b.bottomRightCorner(k, k);
    offset += k;
  }
  return out;
}

Eigen::MatrixXd block_matrix(const BasicForm& block, double precision) {
  return std::visit(overloaded{
                        [](const N1Block& b) -> Eigen::MatrixXd {
                          Eigen::MatrixXd m(2, 2);
                          m << b.lambda, b.b, 0, b.lambda;
                          return m;
                        },
                        [](const HyperbolicBlock&) -> Eigen::MatrixXd {
                          Eigen::MatrixXd m(2, 2);
                          m << 2.0, 0.0, 0.0, 0.5;
                          return m;
                        },
                        [&](const RotationBlock& r) -> Eigen::MatrixXd {
                          return rotation2(angle_as_double(r.angle, precision));
                        },
                        [&](const N2Block& n) -> Eigen::MatrixXd {
                          // [[R, B], [0, R]] with B = +-R(theta): symplectic, and
                          // (b2 - b3) sin(theta) = -+2 sin^2(theta) fixes triviality.
                          Eigen::Matrix2d r = rotation2(angle_as_double(n.angle, precision));
                          Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
                          m.topLeftCorner(2, 2) = r;
                          m.bottomRightCorner(2, 2) = r;
                          m.topRightCorner(2, 2) = n.trivial ? Eigen::Matrix2d(-r) : r;
                          return m;
                        },
                    },
                    block);
}

Eigen::MatrixXd realize(const Decomposition& d, double precision) {
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(d.blocks().size());
  for (const BasicForm& b : d.blocks()) mats.push_back(block_matrix(b, precision));
  return diamond_sum(mats);
}

Eigen::MatrixXd standard_symplectic_form(int dim) {
  if (dim % 2 != 0) throw InvalidInput("symplectic form needs even dimension");
  const int k = dim / 2;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
  j.topRightCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);
  j.bottomLeftCorner(k, k) = Eigen::MatrixXd::Identity(k, k);
  return j;
}

int elliptic_height(const Decomposition& d) {
  const Census& c = d.census();
  return 2 * (c.p_minus + c.p_zero + c.p_plus + c.q_minus + c.q_zero + c.q_plus + c.r) + 4 * (c.r_star + c.r_zero);
}

Classification classify(const Decomposition& d) {
  const Census& c = d.census();
  const int e = elliptic_height(d);
  Classification out;
  if (e == d.dimension())
    out.stability = Stability::elliptic;
  else if (e == 0)
    out.stability = Stability::hyperbolic;
  out.degenerate = c.p_minus + c.p_zero + c.p_plus > 0;
  return out;
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::elliptic:
      return "elliptic";
    case Stability::hyperbolic:
      return "hyperbolic";
    case Stability::neither:
      break;
  }
  return "neither";
}

int splitting_plus_at_one(const Decomposition& d) { return d.census().p_minus + d.census().p_zero; }

int c_total(const Decomposition& d) {
  const Census& c = d.census();
  return c.q_zero + c.q_plus + c.r + 2 * c.r_star;
}

SpectralPoint SpectralPoint::one() { return SpectralPoint(Kind::one); }
SpectralPoint SpectralPoint::minus_one() { return SpectralPoint(Kind::minus_one); }

SpectralPoint SpectralPoint::at(const ExactAngle& angle) {
  if (angle.is_rational() && angle.exact_value() == Rational(1, 2)) return minus_one();
  return SpectralPoint(Kind::angle, angle);
}

SpectralPoint SpectralPoint::from_turns(const Rational& t) {
  if (t < 0 || t >= 1)
    throw InvalidInput("turn value " + format_exact(t) + " is not in [0, 1) and names no point of the unit circle");
  if (t == 0) return one();
  return at(ExactAngle::rational(t));
}

std::string SpectralPoint::describe() const {
  if (is_one()) return "1";
  if (is_minus_one()) return "-1";
  return "exp(2 pi i " + angle_->describe() + ")";
}

SplittingPair splitting_numbers(const BasicForm& block, const SpectralPoint& omega) {
  return std::visit(overloaded{
                        [&](const N1Block& b) -> SplittingPair {
                          const bool here = b.lambda == 1 ? omega.is_one() : omega.is_minus_one();
                          if (!here) return {};
                          // +1 blocks: b = 1, 0 split (1,1); -1 blocks: b = 0, -1 do.
                          const bool active = b.lambda == 1 ? b.b >= 0 : b.b <= 0;
                          return active ? SplittingPair{1, 1} : SplittingPair{};
                        },
                        [](const HyperbolicBlock&) -> SplittingPair { return {}; },
                        [&](const RotationBlock& r) -> SplittingPair {
                          const ExactAngle* w = omega.angle();
                          if (!w) return {};
                          if (w->same_value(r.angle)) return {0, 1};
                          if (w->same_value(r.angle.conjugate())) return {1, 0};
                          return {};
                        },
                        [&](const N2Block& n) -> SplittingPair {
                          const ExactAngle* w = omega.angle();
                          if (!w || n.trivial) return {};
                          if (w->same_value(n.angle) || w->same_value(n.angle.conjugate())) return {1, 1};
                          return {};
                        },
                    },
                    block);
}

std::vector<SpectralPoint> circle_spectrum(const BasicForm& block) {
  return std::visit(overloaded{
                        [](const N1Block& b) -> std::vector<SpectralPoint> {
                          if (b.lambda == -1) return {SpectralPoint::minus_one()};
                          return {};
                        },
                        [](const HyperbolicBlock&) -> std::vector<SpectralPoint> { return {}; },
                        [](const RotationBlock& r) -> std::vector<SpectralPoint> {
                          return {SpectralPoint::at(r.angle), SpectralPoint::at(r.angle.conjugate())};
                        },
                        [](const N2Block& n) -> std::vector<SpectralPoint> {
                          return {SpectralPoint::at(n.angle), SpectralPoint::at(n.angle.conjugate())};
                        },
                    },
                    block);
}

}  // namespace symindex
