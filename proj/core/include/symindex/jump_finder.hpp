#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symindex/iteration.hpp"

namespace symindex {

// Where the fractional part f = {m theta / pi} = {2 m x} sits relative to a
// closeness threshold delta.
enum class Side {
  zero,  // f = 0 (rational angle on the period lattice)
  low,   // 0 < f < delta
  high,  // 1 - delta < f < 1
  far,   // delta <= f <= 1 - delta
};

std::string to_string(Side side);
Side flipped(Side side);

Side closeness_side(const ExactAngle& x, std::int64_t m, const Rational& delta, int budget = refinement_budget());

// Sides of the irrational R blocks of a seed at iterate m, in the order of
// Decomposition::rotation_angles().
std::vector<Side> rotation_sides(const PathSeed& seed, std::int64_t m, const Rational& delta,
                                 int budget = refinement_budget());

// One evaluated relation of a jump tuple: lhs `relation` rhs.
struct ConditionRecord {
  std::string name;
  std::string relation;  // "==", "<=", ">=", "<"
  Interval lhs;
  Interval rhs;
  bool pass = false;
  std::string detail;
  bool operator==(const ConditionRecord&) const = default;
};

struct PathVerification {
  std::vector<ConditionRecord> conditions;
  bool passed() const;
  bool operator==(const PathVerification&) const = default;
};

// (N, m_1, ..., m_q) with m_k = ([N / (M i_k)] + chi_k) M, where i_k is the
// mean index of path k and M the angle period.
struct JumpTuple {
  std::int64_t N = 0;
  std::vector<std::int64_t> m;
  std::vector<int> chi;
  std::int64_t period = 1;
  Rational delta;
  std::vector<PathVerification> per_path;

  bool verified() const;
  bool operator==(const JumpTuple&) const = default;
};

// Smallest M >= 1 with M theta / pi integral for every rational eigenvalue
// angle across the seeds: lcm of the denominators of 2x.
std::int64_t angle_period(std::span<const PathSeed> seeds);

// [N / (M i)] for the seed's mean index i, certified.
std::int64_t jump_base(const PathSeed& seed, std::int64_t N, std::int64_t period, int budget = refinement_budget());

struct JumpSearchOptions {
  Rational delta{1, 1000};
  std::int64_t n_min = 1;
  std::int64_t n_max = 1000000;
  std::size_t limit = 1;
  std::vector<std::int64_t> exclude;
  // Optional per-seed constraint on rotation_sides() at m_k.
  std::optional<std::vector<std::vector<Side>>> required_sides;
  int workers = 1;
  int budget = refinement_budget();
  // Called after each scanned chunk with (last N scanned, n_max, tuples so far).
  std::function<void(std::int64_t, std::int64_t, std::size_t)> progress;
};

// Scans N = n_min..n_max; for each N and chi in {0,1}^q builds m from the
// lattice formula and keeps the tuple when every jump condition holds for
// every seed. Results are sorted by (N, chi) and truncated to `limit`.
// Throws NoTupleFound when the range holds none.
std::vector<JumpTuple> find_jump_tuples(std::span<const PathSeed> seeds, const JumpSearchOptions& options);

// Re-evaluates every condition from scratch.
std::vector<PathVerification> verify_tuple(const JumpTuple& tuple, std::span<const PathSeed> seeds,
                                           int budget = refinement_budget());

// Tuples whose irrational rotation sides are all opposite to those of
// `first` (N != first.N). Across such a pair the counts Delta and Delta'
// add up to r - r' + 2 (r* - r*') for every seed.
std::vector<JumpTuple> find_complementary_tuples(std::span<const PathSeed> seeds, const JumpTuple& first,
                                                 JumpSearchOptions options);

struct DeltaReport {
  std::int64_t delta_k = 0;
  std::int64_t delta_k_prime = 0;
  std::int64_t c_k = 0;
  std::int64_t s_plus = 0;
  bool prime_measured = false;  // delta_k_prime came from a complementary iterate
  bool operator==(const DeltaReport&) const = default;
};

// Delta_k: sum of S^- over circle eigenvalues with 0 < {m_k theta / pi} <
// delta. Delta'_k is measured at complementary_m when given, otherwise it is
// the complement r - r' + 2 (r* - r*') - Delta_k.
DeltaReport compute_delta(const PathSeed& seed, std::int64_t m_k, const Rational& delta,
                          std::optional<std::int64_t> complementary_m = std::nullopt,
                          int budget = refinement_budget());

std::int64_t delta_complement_total(const PathSeed& seed);

// i(gamma^{2 m_k}) = 2N - S^+(1) - C(M) + 2 Delta_k at a jump tuple.
std::int64_t index_at_even_jump(const PathSeed& seed, std::int64_t N, std::int64_t delta_k);

}  // namespace symindex
