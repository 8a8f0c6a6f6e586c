#include "symindex/iteration.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <thread>

#include "symindex/errors.hpp"

namespace symindex {

namespace {

[[noreturn]] void rethrow_with_context(const Undecidable& e, const char* kind, std::size_t j, const ExactAngle& angle,
                                       std::int64_t m) {
  throw Undecidable(std::string(e.what()) + " [" + kind + " block #" + std::to_string(j + 1) + ", angle " +
                    angle.describe() + ", m = " + std::to_string(m) + "]");
}

std::int64_t parity_even(std::int64_t m) { return m % 2 == 0 ? 1 : 0; }

int seed_max_step(const PathSeed& seed) {
  const Decomposition& d = seed.decomposition();
  int step = std::numeric_limits<int>::max();
  for (const auto* list : {&d.rotation_angles(), &d.nontrivial_n2_angles()})
    for (const ExactAngle& a : *list)
      if (!a.is_rational()) step = std::min(step, a.max_step());
  return step == std::numeric_limits<int>::max() ? 0 : step;
}

}  // namespace

PathSeed::PathSeed(std::int64_t i1, int nu1, Decomposition decomposition)
    : i1_(i1), nu1_(nu1), decomposition_(std::move(decomposition)) {
  if (decomposition_.n() < 2) throw InvalidInput("path seeds need n >= 2");
  const Census& c = decomposition_.census();
  const int expected = c.p_minus + 2 * c.p_zero + c.p_plus;
  if (nu1 != expected) {
    throw InvalidInput("initial nullity " + std::to_string(nu1) + " disagrees with the normal form: nu = p- + 2 p0 + p+ = " +
                       std::to_string(expected));
  }
}

std::int64_t index_iterate(const PathSeed& seed, std::int64_t m, int budget) {
  if (m < 1) throw InvalidInput("iterate m must be >= 1");
  const Census& c = seed.census();
  const Decomposition& d = seed.decomposition();

  std::int64_t value = m * (seed.initial_index() + c.p_minus + c.p_zero - c.r);
  const auto& theta = d.rotation_angles();
  for (std::size_t j = 0; j < theta.size(); ++j) {
    try {
      value += 2 * ceil_mul(theta[j], m, budget);
    } catch (const Undecidable& e) {
      rethrow_with_context(e, "R", j, theta[j], m);
    }
  }
  value -= c.r + c.p_minus + c.p_zero;
  value -= parity_even(m) * (c.q_zero + c.q_plus);
  const auto& alpha = d.nontrivial_n2_angles();
  for (std::size_t j = 0; j < alpha.size(); ++j) value += 2 * varphi_mul(alpha[j], m, budget);
  value -= 2 * c.r_star;
  return value;
}

std::int64_t nullity_iterate(const PathSeed& seed, std::int64_t m, int budget) {
  if (m < 1) throw InvalidInput("iterate m must be >= 1");
  const Census& c = seed.census();
  const Decomposition& d = seed.decomposition();

  std::int64_t varsigma = c.r + c.r_star + c.r_zero;
  for (const auto* list : {&d.rotation_angles(), &d.nontrivial_n2_angles(), &d.trivial_n2_angles()})
    for (const ExactAngle& a : *list) varsigma -= varphi_mul(a, m, budget);

  return seed.initial_nullity() + parity_even(m) * (c.q_minus + 2 * c.q_zero + c.q_plus) + 2 * varsigma;
}

IterationRow iteration_row(const PathSeed& seed, std::int64_t m, int budget) {
  return {m, index_iterate(seed, m, budget), nullity_iterate(seed, m, budget)};
}

Interval mean_index(const PathSeed& seed, int step) {
  const Census& c = seed.census();
  Interval total(Rational(seed.initial_index() + c.p_minus + c.p_zero - c.r));
  for (const ExactAngle& a : seed.decomposition().rotation_angles()) total = total + a.enclosure(step).scaled(2);
  return total;
}

int compare_mean_index(const PathSeed& seed, const Rational& threshold, int budget) {
  const int limit = std::min(budget, seed_max_step(seed));
  for (int s = 0; s <= limit; ++s) {
    int sign = mean_index(seed, s).sign_against(threshold);
    if (sign != kStraddles) return sign;
  }
  throw Undecidable("cannot compare the mean index with " + format_exact(threshold) + " within " +
                    std::to_string(limit) + " refinements");
}

Interval mean_index_within(const PathSeed& seed, const Rational& tolerance, int budget) {
  const int limit = std::min(budget, seed_max_step(seed));
  Interval best = mean_index(seed, 0);
  for (int s = 0; s <= limit; ++s) {
    best = mean_index(seed, s);
    if (best.width() <= tolerance) return best;
  }
  throw Undecidable("cannot enclose the mean index to width " + format_exact(tolerance) + " within " +
                    std::to_string(limit) + " refinements");
}

std::int64_t bott_gap(const PathSeed& seed, std::int64_t m, int budget) {
  return index_iterate(seed, m + 1, budget) - index_iterate(seed, m, budget) - nullity_iterate(seed, m, budget);
}

std::vector<IterationRow> iteration_table(const PathSeed& seed, std::int64_t m_max, int workers) {
  if (m_max < 0) throw InvalidInput("m_max must be non-negative");
  std::vector<IterationRow> rows(static_cast<std::size_t>(m_max));
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::int64_t>(m_max, 1))));
  const int budget = refinement_budget();
  auto fill = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t m = begin; m < end; ++m) rows[static_cast<std::size_t>(m - 1)] = iteration_row(seed, m, budget);
  };
  if (workers == 1) {
    fill(1, m_max + 1);
    return rows;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (m_max + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = 1 + w * chunk;
    const std::int64_t end = std::min(m_max + 1, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        fill(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace symindex
