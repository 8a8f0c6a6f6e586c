#include "symindex/analysis.hpp"

#include <algorithm>

#include "symindex/errors.hpp"

namespace symindex {

namespace {

std::optional<JumpTuple> next_tuple(std::span<const PathSeed> seeds, JumpSearchOptions options, std::int64_t n_min,
                                    const JumpTuple* complement_of) {
  if (n_min > options.n_max) return std::nullopt;
  options.n_min = n_min;
  options.limit = 1;
  try {
    std::vector<JumpTuple> found =
        complement_of ? find_complementary_tuples(seeds, *complement_of, options) : find_jump_tuples(seeds, options);
    return found.front();
  } catch (const NoTupleFound&) {
    return std::nullopt;
  }
}

std::int64_t excess_at(const PathSeed& seed, std::int64_t N, std::int64_t m, int budget) {
  IterationRow row = iteration_row(seed, 2 * m, budget);
  return row.index + row.nullity - 2 * N;
}

}  // namespace

void validate_system(const GeodesicSystem& system, int budget) {
  if (system.n < 2) throw InvalidInput("system dimension n must be >= 2");
  if (system.seeds.empty()) throw InvalidInput("system has no closed geodesics");
  if (system.reversibility_lambda < 1) throw InvalidInput("reversibility lambda must be >= 1");
  for (std::size_t k = 0; k < system.seeds.size(); ++k) {
    if (system.seeds[k].n() != system.n)
      throw InvalidInput("seed #" + std::to_string(k + 1) + " has n = " + std::to_string(system.seeds[k].n()) +
                         ", system has n = " + std::to_string(system.n));
  }
  if (!system.pinching_asserted) return;
  std::vector<PinchingCheck> checks = validate_pinching_bounds(system, budget);
  for (std::size_t k = 0; k < checks.size(); ++k) {
    if (!checks[k].index_bound)
      throw InvalidInput("seed #" + std::to_string(k + 1) + " violates the pinching bound i(c) >= n - 1");
    if (!checks[k].mean_bound)
      throw InvalidInput("seed #" + std::to_string(k + 1) + " violates the pinching bound mean index > n - 1");
  }
}

std::vector<PinchingCheck> validate_pinching_bounds(const GeodesicSystem& system, int budget) {
  std::vector<PinchingCheck> out;
  for (const PathSeed& s : system.seeds) {
    PinchingCheck c;
    c.index_bound = s.initial_index() >= system.n - 1;
    c.mean_bound = compare_mean_index(s, Rational(system.n - 1), budget) > 0;
    out.push_back(c);
  }
  return out;
}

std::int64_t nullity_at_even_jump(const PathSeed& seed) {
  const Census& c = seed.census();
  return c.p_minus + 2 * c.p_zero + c.p_plus + c.q_minus + 2 * c.q_zero + c.q_plus + 2 * c.r_rational +
         2 * c.r_star_rational + 2 * c.r_zero_rational;
}

Rational betti_constant(int n) {
  if (n < 2) throw InvalidInput("betti_constant needs n >= 2");
  Rational b(n % 2 == 0 ? -n : n + 1, 2 * (n - 1));
  b.canonicalize();
  return b;
}

PeakSearch find_peak_geodesic(const GeodesicSystem& system, const JumpTuple& tuple, int budget) {
  if (tuple.m.size() != system.seeds.size()) throw InvalidInput("tuple does not match the system");
  PeakSearch out;
  for (std::size_t k = 0; k < system.seeds.size(); ++k) {
    out.excess.push_back(excess_at(system.seeds[k], tuple.N, tuple.m[k], budget));
    if (out.excess.back() == system.n - 1) out.candidates.push_back(k);
  }
  out.fcg_contradiction = out.candidates.empty();
  out.morse_constant = Rational(2 * tuple.N) * betti_constant(system.n);
  return out;
}

PeakRecord derive_peak_constraints(const PathSeed& seed, const JumpTuple& tuple, std::size_t k,
                                       const DeltaReport& delta, int budget) {
  if (k >= tuple.m.size()) throw InvalidInput("seed position outside the tuple");
  const Census& c = seed.census();
  PeakRecord rec;
  rec.seed = k;
  rec.N = tuple.N;
  rec.m = tuple.m[k];
  rec.delta = delta;
  rec.index_even = index_at_even_jump(seed, tuple.N, delta.delta_k);
  rec.index_even_direct = index_iterate(seed, 2 * rec.m, budget);
  rec.nullity_even = nullity_at_even_jump(seed);
  rec.nullity_even_direct = nullity_iterate(seed, 2 * rec.m, budget);
  rec.peak_excess = rec.index_even + rec.nullity_even - 2 * tuple.N;
  rec.dimension = c.half_dimension();

  const std::int64_t irr_r = c.r - c.r_rational;
  const std::int64_t irr_star = c.r_star - c.r_star_rational;
  rec.terms = {
      {"p-", 1, c.p_minus},
      {"q+", 1, c.q_plus},
      {"r* - r*' + r - r' - Delta", 2, irr_star + irr_r - delta.delta_k},
      {"r*", 2, c.r_star},
      {"r0 - r0'", 2, c.r_zero - c.r_zero_rational},
      {"h", 1, c.h},
  };
  rec.elliptic_height = elliptic_height(seed.decomposition());
  rec.elliptic = rec.elliptic_height == 2 * (seed.n() - 1);
  rec.irrational_rotation_count = irr_r;
  rec.rational_branch = irr_r == 0;

  std::string problems;
  auto note = [&](const std::string& s) { problems += problems.empty() ? s : "; " + s; };
  if (rec.index_even != rec.index_even_direct)
    note("index at 2m: " + std::to_string(rec.index_even) + " from the jump identity vs " +
         std::to_string(rec.index_even_direct) + " from the iteration formula");
  if (rec.nullity_even != rec.nullity_even_direct)
    note("nullity at 2m: " + std::to_string(rec.nullity_even) + " vs " + std::to_string(rec.nullity_even_direct));
  if (rec.peak_excess != seed.n() - 1)
    note("i + nu - 2N = " + std::to_string(rec.peak_excess) + ", not n - 1 = " + std::to_string(seed.n() - 1));
  for (const ConstraintTerm& t : rec.terms)
    if (t.value != 0) note(t.name + " = " + std::to_string(t.value));
  if (!problems.empty())
    throw ConstraintViolation("seed #" + std::to_string(k + 1) + " cannot sit at the peak: " + problems);
  return rec;
}

SecondGeodesic second_geodesic(const GeodesicSystem& system, std::size_t first, const JumpTuple& second_tuple,
                               int budget) {
  if (first >= system.seeds.size()) throw InvalidInput("first geodesic index out of range");
  if (second_tuple.m.size() != system.seeds.size()) throw InvalidInput("tuple does not match the system");
  SecondGeodesic out;
  for (std::size_t k = 0; k < system.seeds.size(); ++k) {
    const PathSeed& s = system.seeds[k];
    DeltaReport d = compute_delta(s, second_tuple.m[k], second_tuple.delta, std::nullopt, budget);
    out.excess.push_back(index_at_even_jump(s, second_tuple.N, d.delta_k) + nullity_at_even_jump(s) -
                         2 * second_tuple.N);
    if (k != first && !out.second && out.excess.back() == system.n - 1) out.second = k;
  }
  out.first_excess = out.excess[first];
  out.first_bound_holds = out.first_excess <= system.n - 2;
  out.fcg_contradiction = !out.second;
  return out;
}

bool AnalysisReport::success() const {
  if (peak_records.empty() || !second_peak_record || !second || !second->second) return false;
  const PeakRecord& a = peak_records.front();
  const PeakRecord& b = *second_peak_record;
  return a.seed != b.seed && a.elliptic && b.elliptic && a.irrational_rotation_count >= 1 &&
         b.irrational_rotation_count >= 1;
}

AnalysisReport analyze(const GeodesicSystem& system, const AnalysisOptions& options) {
  const int budget = options.search.budget;
  validate_system(system, budget);
  std::span<const PathSeed> seeds(system.seeds);

  AnalysisReport report;
  report.n = system.n;
  report.q = system.seeds.size();
  report.pinching = validate_pinching_bounds(system, budget);
  report.betti = betti_constant(system.n);

  std::int64_t n_min = options.search.n_min;
  for (std::size_t attempt = 0; attempt < options.max_tuples; ++attempt) {
    std::optional<JumpTuple> t = next_tuple(seeds, options.search, n_min, nullptr);
    if (!t) break;
    n_min = t->N + 1;
    PeakSearch peaks = find_peak_geodesic(system, *t, budget);
    if (peaks.candidates.empty()) {
      ++report.tuples_without_peak;
      report.tuple = std::move(t);
      report.peaks = std::move(peaks);
      continue;
    }
    report.tuple = std::move(t);
    report.peaks = std::move(peaks);
    break;
  }
  if (!report.tuple || report.peaks.candidates.empty()) {
    report.fcg_contradiction = true;
    report.flag_reason = report.tuple ? "no geodesic reaches i + nu = 2N + (n - 1) at any examined jump tuple"
                                      : "no jump tuple within the search bounds";
    return report;
  }

  const JumpTuple& t = *report.tuple;
  for (std::size_t k : report.peaks.candidates) {
    DeltaReport d = compute_delta(system.seeds[k], t.m[k], t.delta, std::nullopt, budget);
    report.peak_records.push_back(derive_peak_constraints(system.seeds[k], t, k, d, budget));
  }
  const std::size_t first = report.peak_records.front().seed;
  if (report.peak_records.front().rational_branch) {
    report.rational_branch = true;
    report.flag_reason = "the peak geodesic has no irrational rotation eigenvalue; rational branch not computed";
    return report;
  }

  n_min = options.search.n_min;
  for (std::size_t attempt = 0; attempt < options.max_tuples; ++attempt) {
    std::optional<JumpTuple> t2 = next_tuple(seeds, options.search, n_min, &t);
    if (!t2) break;
    n_min = t2->N + 1;
    SecondGeodesic s = second_geodesic(system, first, *t2, budget);
    report.second_tuple = std::move(t2);
    report.second = std::move(s);
    if (report.second->second) break;
    ++report.complementary_without_peak;
  }
  if (!report.second || !report.second->second) {
    report.fcg_contradiction = true;
    report.flag_reason = report.second ? "no second geodesic reaches the peak at any examined complementary tuple"
                                       : "no complementary jump tuple within the search bounds";
    return report;
  }

  const std::size_t k2 = *report.second->second;
  const JumpTuple& t2 = *report.second_tuple;
  DeltaReport d2 = compute_delta(system.seeds[k2], t2.m[k2], t2.delta, std::nullopt, budget);
  report.second_peak_record = derive_peak_constraints(system.seeds[k2], t2, k2, d2, budget);
  if (report.second_peak_record->rational_branch) {
    report.rational_branch = true;
    report.flag_reason = "the second peak geodesic has no irrational rotation eigenvalue; rational branch not computed";
  }
  return report;
}

}  // namespace symindex
