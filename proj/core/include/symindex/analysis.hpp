#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symindex/jump_finder.hpp"

namespace symindex {

// q prime closed geodesics on a Finsler S^n, one path seed each.
struct GeodesicSystem {
  int n = 2;
  Rational reversibility_lambda{1};
  std::vector<PathSeed> seeds;
  bool pinching_asserted = false;
};

struct PinchingCheck {
  bool index_bound = false;  // i1 >= n - 1
  bool mean_bound = false;   // mean index > n - 1
  bool passed() const { return index_bound && mean_bound; }
  bool operator==(const PinchingCheck&) const = default;
};

// Structural checks: seeds present, each of dimension n, lambda >= 1, and the
// pinching bounds when the system asserts them.
void validate_system(const GeodesicSystem& system, int budget = refinement_budget());

std::vector<PinchingCheck> validate_pinching_bounds(const GeodesicSystem& system, int budget = refinement_budget());

// nu(gamma^{2 m}) on the angle lattice: p- + 2 p0 + p+ + q- + 2 q0 + q+ + 2 r' + 2 r*' + 2 r0'.
std::int64_t nullity_at_even_jump(const PathSeed& seed);

// B(n, 1): -n / (2 (n - 1)) for even n, (n + 1) / (2 (n - 1)) for odd n.
Rational betti_constant(int n);

struct PeakSearch {
  // i(2 m_k) + nu(2 m_k) - 2N per seed.
  std::vector<std::int64_t> excess;
  std::vector<std::size_t> candidates;  // seeds with excess = n - 1
  bool fcg_contradiction = false;
  Rational morse_constant;  // 2N B(n, 1)
  bool operator==(const PeakSearch&) const = default;
};

PeakSearch find_peak_geodesic(const GeodesicSystem& system, const JumpTuple& tuple, int budget = refinement_budget());

// coefficient * value, one summand of the vanishing sum.
struct ConstraintTerm {
  std::string name;
  std::int64_t coefficient = 1;
  std::int64_t value = 0;
  bool operator==(const ConstraintTerm&) const = default;
};

struct PeakRecord {
  std::size_t seed = 0;
  std::int64_t N = 0;
  std::int64_t m = 0;
  std::int64_t index_even = 0;           // 2N - S+ - C + 2 Delta
  std::int64_t index_even_direct = 0;    // iteration formula at 2m
  std::int64_t nullity_even = 0;         // lattice closed form
  std::int64_t nullity_even_direct = 0;  // iteration formula at 2m
  std::int64_t peak_excess = 0;          // i + nu - 2N, expected n - 1
  std::int64_t dimension = 0;            // census half dimension, n - 1
  std::vector<ConstraintTerm> terms;     // dimension - peak_excess, summand by summand
  DeltaReport delta;
  int elliptic_height = 0;
  bool elliptic = false;
  std::int64_t irrational_rotation_count = 0;  // r - r'
  bool rational_branch = false;                // r - r' = 0 at the peak
  bool operator==(const PeakRecord&) const = default;
};

// Evaluates the peak identity for seed k of the tuple and splits its
// difference from n - 1 into non-negative summands, each of which must
// vanish. Throws ConstraintViolation otherwise.
PeakRecord derive_peak_constraints(const PathSeed& seed, const JumpTuple& tuple, std::size_t k,
                                       const DeltaReport& delta, int budget = refinement_budget());

struct SecondGeodesic {
  std::vector<std::int64_t> excess;  // at the second tuple, per seed
  std::int64_t first_excess = 0;
  bool first_bound_holds = false;  // first_excess <= n - 2
  std::optional<std::size_t> second;
  bool fcg_contradiction = false;
  bool operator==(const SecondGeodesic&) const = default;
};

SecondGeodesic second_geodesic(const GeodesicSystem& system, std::size_t first, const JumpTuple& second_tuple,
                               int budget = refinement_budget());

struct AnalysisOptions {
  JumpSearchOptions search;
  // Tuples examined for a first peak, and complementary tuples for a second.
  std::size_t max_tuples = 64;
};

struct AnalysisReport {
  int n = 0;
  std::size_t q = 0;
  std::vector<PinchingCheck> pinching;
  Rational betti{0};

  std::optional<JumpTuple> tuple;
  PeakSearch peaks;
  std::vector<PeakRecord> peak_records;  // one per candidate at `tuple`
  std::size_t tuples_without_peak = 0;

  std::optional<JumpTuple> second_tuple;
  std::optional<SecondGeodesic> second;
  std::optional<PeakRecord> second_peak_record;
  std::size_t complementary_without_peak = 0;

  bool fcg_contradiction = false;
  bool rational_branch = false;
  std::string flag_reason;

  // Two distinct elliptic geodesics, each with an irrational rotation eigenvalue.
  bool success() const;
  bool operator==(const AnalysisReport&) const = default;
};

// validate -> jump tuple -> peak -> peak constraints -> complementary tuple -> second
// geodesic. Tuples are examined in N order until one has a peak, and
// complementary tuples likewise; the contradiction flag is raised only when
// the search bounds are exhausted.
AnalysisReport analyze(const GeodesicSystem& system, const AnalysisOptions& options);

}  // namespace symindex
