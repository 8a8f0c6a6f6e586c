#include "oracle.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace {

using i128 = __int128;

i128 isqrt(i128 v) {
  if (v < 0) throw std::domain_error("isqrt of a negative number");
  i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool even(std::int64_t m) { return m % 2 == 0; }

std::vector<const AngleSpec*> circle_angles(const SeedSpec& s) {
  std::vector<const AngleSpec*> out;
  for (const BlockSpec& b : s.blocks)
    if (b.kind == BlockSpec::rot || b.kind == BlockSpec::n2) out.push_back(&b.angle);
  return out;
}

}  // namespace

AngleSpec rational_angle(std::int64_t p, std::int64_t q) {
  AngleSpec x;
  x.rational = true;
  const std::int64_t g = std::gcd(p, q);
  x.p = p / g;
  x.q = q / g;
  return x;
}

AngleSpec quadratic_angle(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  AngleSpec x;
  x.rational = false;
  x.a = a;
  x.b = b;
  x.c = c;
  x.d = d;
  return x;
}

BlockSpec n1(int lambda, int b) {
  BlockSpec s;
  s.kind = BlockSpec::n1;
  s.lambda = lambda;
  s.b = b;
  return s;
}

BlockSpec rot(AngleSpec x) {
  BlockSpec s;
  s.kind = BlockSpec::rot;
  s.angle = x;
  return s;
}

BlockSpec n2(AngleSpec x, bool trivial) {
  BlockSpec s;
  s.kind = BlockSpec::n2;
  s.angle = x;
  s.trivial = trivial;
  return s;
}

BlockSpec hyp() {
  BlockSpec s;
  s.kind = BlockSpec::hyp;
  return s;
}

std::string describe(const AngleSpec& x) {
  std::ostringstream o;
  if (x.rational)
    o << x.p << "/" << x.q;
  else
    o << "(" << x.a << (x.b < 0 ? " - " : " + ") << std::abs(x.b) << "*sqrt(" << x.d << "))/" << x.c;
  return o.str();
}

std::string describe(const SeedSpec& s) {
  std::ostringstream o;
  o << "n=" << s.n << " i1=" << s.i1 << " [";
  for (std::size_t j = 0; j < s.blocks.size(); ++j) {
    const BlockSpec& b = s.blocks[j];
    if (j) o << ", ";
    switch (b.kind) {
      case BlockSpec::n1:
        o << "N1(" << b.lambda << "," << b.b << ")";
        break;
      case BlockSpec::rot:
        o << "R(" << describe(b.angle) << ")";
        break;
      case BlockSpec::n2:
        o << (b.trivial ? "N2t(" : "N2(") << describe(b.angle) << ")";
        break;
      case BlockSpec::hyp:
        o << "D(2)";
        break;
    }
  }
  o << "]";
  return o.str();
}

symindex::ExactAngle to_angle(const AngleSpec& x) {
  if (x.rational) return symindex::ExactAngle::rational(x.p, x.q);
  return symindex::ExactAngle::quadratic(symindex::Integer(static_cast<long>(x.a)),
                                         symindex::Integer(static_cast<long>(x.b)),
                                         symindex::Integer(static_cast<long>(x.c)),
                                         symindex::Integer(static_cast<long>(x.d)));
}

symindex::BasicForm to_block(const BlockSpec& b) {
  switch (b.kind) {
    case BlockSpec::n1:
      return symindex::make_n1(b.lambda, b.b);
    case BlockSpec::rot:
      return symindex::make_rotation(to_angle(b.angle));
    case BlockSpec::n2:
      return symindex::make_n2(to_angle(b.angle), b.trivial);
    case BlockSpec::hyp:
      break;
  }
  return symindex::make_hyperbolic();
}

symindex::PathSeed to_seed(const SeedSpec& s) {
  std::vector<symindex::BasicForm> blocks;
  for (const BlockSpec& b : s.blocks) blocks.push_back(to_block(b));
  return symindex::PathSeed(s.i1, nu1(s), symindex::Decomposition(s.n, std::move(blocks)));
}

std::int64_t floor_mul(const AngleSpec& x, std::int64_t m) {
  if (x.rational) return static_cast<std::int64_t>(floor_div(static_cast<i128>(m) * x.p, x.q));
  const i128 t = static_cast<i128>(m) * x.b;
  const i128 root = isqrt(t * t * x.d);
  const i128 s = t >= 0 ? root : -root - 1;  // floor(t sqrt d); never an integer
  return static_cast<std::int64_t>(floor_div(static_cast<i128>(m) * x.a + s, x.c));
}

bool integral_mul(const AngleSpec& x, std::int64_t m) {
  if (!x.rational) return false;
  return (static_cast<i128>(m) * x.p) % x.q == 0;
}

long double value(const AngleSpec& x) {
  if (x.rational) return static_cast<long double>(x.p) / x.q;
  return (x.a + x.b * std::sqrt(static_cast<long double>(x.d))) / x.c;
}

long double frac2(const AngleSpec& x, std::int64_t m) {
  if (x.rational) {
    const i128 num = static_cast<i128>(2 * m) * x.p;
    return static_cast<long double>(static_cast<std::int64_t>(((num % x.q) + x.q) % x.q)) / x.q;
  }
  // 2 m x = (2 m a + 2 m b sqrt d) / c; subtract the exact floor first.
  const std::int64_t k = floor_mul(x, 2 * m);
  const long double s = std::sqrt(static_cast<long double>(x.d));
  const long double whole = (static_cast<long double>(2 * m) * x.a - static_cast<long double>(k) * x.c +
                             static_cast<long double>(2 * m) * x.b * s) /
                            x.c;
  return whole;
}

Counts counts(const SeedSpec& s) {
  Counts c;
  for (const BlockSpec& b : s.blocks) {
    switch (b.kind) {
      case BlockSpec::n1:
        if (b.lambda == 1) {
          (b.b == 1 ? c.p_minus : b.b == 0 ? c.p_zero : c.p_plus)++;
        } else {
          (b.b == 1 ? c.q_minus : b.b == 0 ? c.q_zero : c.q_plus)++;
        }
        break;
      case BlockSpec::rot:
        ++c.r;
        if (b.angle.rational) ++c.r_rat;
        break;
      case BlockSpec::n2:
        if (b.trivial) {
          ++c.r_zero;
          if (b.angle.rational) ++c.r_zero_rat;
        } else {
          ++c.r_star;
          if (b.angle.rational) ++c.r_star_rat;
        }
        break;
      case BlockSpec::hyp:
        ++c.h;
        break;
    }
  }
  return c;
}

int nu1(const SeedSpec& s) {
  const Counts c = counts(s);
  return c.p_minus + 2 * c.p_zero + c.p_plus;
}

std::int64_t index(const SeedSpec& s, std::int64_t m) {
  const Counts c = counts(s);
  std::int64_t v = m * (s.i1 + c.p_minus + c.p_zero - c.r) - c.r - c.p_minus - c.p_zero;
  if (even(m)) v -= c.q_zero + c.q_plus;
  for (const BlockSpec& b : s.blocks) {
    if (b.kind == BlockSpec::rot) {
      const std::int64_t E = floor_mul(b.angle, m) + (integral_mul(b.angle, m) ? 0 : 1);
      v += 2 * E;
    } else if (b.kind == BlockSpec::n2 && !b.trivial) {
      v += 2 * (integral_mul(b.angle, m) ? 0 : 1) - 2;
    }
  }
  return v;
}

std::int64_t nullity(const SeedSpec& s, std::int64_t m) {
  const Counts c = counts(s);
  std::int64_t v = nu1(s);
  if (even(m)) v += c.q_minus + 2 * c.q_zero + c.q_plus;
  for (const AngleSpec* x : circle_angles(s))
    if (integral_mul(*x, m)) v += 2;
  return v;
}

int kernel_dim(const SeedSpec& s, std::int64_t m) {
  int dim = 0;
  for (const BlockSpec& b : s.blocks) {
    switch (b.kind) {
      case BlockSpec::n1:
        // N1(l, b)^m = l^m [[1, m b / l], [0, 1]]; minus I is nilpotent only when l^m = 1.
        if (b.lambda == 1 || even(m)) dim += b.b == 0 ? 2 : 1;
        break;
      case BlockSpec::rot:
        if (integral_mul(b.angle, m)) dim += 2;
        break;
      case BlockSpec::n2:
        // [[R^m, m R^(m-1) B], [0, R^m]] - I has rank 2 once R^m = I (B invertible).
        if (integral_mul(b.angle, m)) dim += 2;
        break;
      case BlockSpec::hyp:
        break;
    }
  }
  return dim;
}

int numeric_kernel_dim(const Eigen::MatrixXd& a, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  int k = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < tol) ++k;
  return k;
}

std::int64_t angle_period(const std::vector<SeedSpec>& seeds) {
  std::int64_t M = 1;
  for (const SeedSpec& s : seeds)
    for (const AngleSpec* x : circle_angles(s))
      if (x->rational) {
        const std::int64_t den = x->q / std::gcd<std::int64_t>(2 * x->p, x->q);
        M = std::lcm(M, den);
      }
  return M;
}

long double mean_index(const SeedSpec& s) {
  const Counts c = counts(s);
  long double v = s.i1 + c.p_minus + c.p_zero - c.r;
  for (const BlockSpec& b : s.blocks)
    if (b.kind == BlockSpec::rot) v += 2 * value(b.angle);
  return v;
}

std::int64_t jump_base(const SeedSpec& s, std::int64_t N, std::int64_t M) {
  const Counts c = counts(s);
  bool rational = true;
  i128 num = s.i1 + c.p_minus + c.p_zero - c.r, den = 1;
  for (const BlockSpec& b : s.blocks) {
    if (b.kind != BlockSpec::rot) continue;
    if (!b.angle.rational) {
      rational = false;
      break;
    }
    // num/den + 2p/q
    num = num * b.angle.q + 2 * b.angle.p * den;
    den *= b.angle.q;
    const i128 g = std::gcd(static_cast<std::int64_t>(num < 0 ? -num : num), static_cast<std::int64_t>(den));
    num /= g;
    den /= g;
  }
  if (rational) return static_cast<std::int64_t>(floor_div(static_cast<i128>(N) * den, static_cast<i128>(M) * num));
  return static_cast<std::int64_t>(std::floor(static_cast<long double>(N) / (M * mean_index(s))));
}

bool jump_conditions(const SeedSpec& s, std::int64_t N, std::int64_t m, long double delta) {
  const Counts c = counts(s);
  const std::int64_t i1 = s.i1, v1 = nu1(s);
  const std::int64_t half_e = c.p_minus + c.p_zero + c.p_plus + c.q_minus + c.q_zero + c.q_plus + c.r +
                              2 * (c.r_star + c.r_zero);
  const std::int64_t s_plus = c.p_minus + c.p_zero;
  if (nullity(s, 2 * m - 1) != v1 || nullity(s, 2 * m + 1) != v1) return false;
  if (index(s, 2 * m - 1) + nullity(s, 2 * m - 1) != 2 * N - (i1 + 2 * s_plus - v1)) return false;
  if (index(s, 2 * m + 1) != 2 * N + i1) return false;
  const std::int64_t ie = index(s, 2 * m), ne = nullity(s, 2 * m);
  if (ie < 2 * N - half_e || ie + ne > 2 * N + half_e) return false;
  for (const AngleSpec* x : circle_angles(s)) {
    const long double f = frac2(*x, m);
    if (std::min(f, 1 - f) >= delta) return false;
  }
  return true;
}

}  // namespace oracle
