// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "generators.hpp"
#include "oracle.hpp"
#include "symindex/analysis.hpp"
#include "symindex/errors.hpp"
#include "symindex/report.hpp"

using namespace symindex;

namespace {

// Pinned limits.
constexpr double kLimit1 = 5, kLimit2 = 30, kLimit3 = 30, kLimit4 = 20, kLimit5 = 120, kLimit9 = 60;
constexpr double kSingularTol = 1e-8;
constexpr std::int64_t kNMax = 1000000;
constexpr std::int64_t kNumericPeriodMax = 420;  // 4 * lcm powers of the float realization stay small

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

bool report(int id, const std::string& title, double limit, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit > 0 && secs >= limit) {
    o.pass = false;
    o.detail += "; over the time limit";
  }
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << " -- " << o.detail << " ("
       << secs << " s";
  if (limit > 0) line << ", limit " << limit << " s";
  line << ")";
  std::cout << line.str() << std::endl;
  return o.pass;
}

int workers() { return static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency()))); }

std::string show(const oracle::SeedSpec& s) { return oracle::describe(s); }

// ---- criterion 1

Outcome unit_iterate() {
  gen::SeedOptions o;  // n <= 6, denominators <= 12, quadratic irrationals
  gen::Rng rng(1001);
  for (int i = 0; i < 1000; ++i) {
    oracle::SeedSpec s = gen::seed(rng, o);
    PathSeed p = oracle::to_seed(s);
    if (index_iterate(p, 1) != s.i1 || nullity_iterate(p, 1) != oracle::nu1(s))
      return fail("seed " + std::to_string(i) + ": " + show(s));
  }
  return {true, "1000 seeds, i(1) = i1 and nu(1) = nu1"};
}

// ---- criterion 2

Outcome nullity_oracle() {
  gen::SeedOptions o;
  o.irrational = 0;
  gen::Rng rng(1002);
  int numeric = 0;
  std::int64_t evaluations = 0;
  for (int i = 0; i < 200; ++i) {
    oracle::SeedSpec s = gen::seed(rng, o);
    PathSeed p = oracle::to_seed(s);
    const std::int64_t M = oracle::angle_period({s});
    for (std::int64_t m = 1; m <= 4 * M; ++m, ++evaluations)
      if (nullity_iterate(p, m) != oracle::kernel_dim(s, m))
        return fail("seed " + std::to_string(i) + " m = " + std::to_string(m) + ": " + show(s));

    if (numeric >= 50 || oracle::counts(s).h > 0 || 4 * M > kNumericPeriodMax) continue;
    ++numeric;
    const Eigen::MatrixXd a = realize(p.decomposition());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd power = id;
    for (std::int64_t m = 1; m <= 4 * M; ++m) {
      power = power * a;
      const int k = oracle::numeric_kernel_dim(power - id, kSingularTol);
      if (k != nullity_iterate(p, m))
        return fail("numeric kernel " + std::to_string(k) + " at m = " + std::to_string(m) + ": " + show(s));
    }
  }
  if (numeric < 50) return fail("only " + std::to_string(numeric) + " seeds qualified for the numeric check");
  return {true, "200 rational seeds, " + std::to_string(evaluations) + " exact comparisons up to 4 lcm; " +
                    std::to_string(numeric) + " seeds also by SVD (tol 1e-8)"};
}

// ---- criterion 3

Outcome bott_gap_bound() {
  gen::SeedOptions o;
  o.i1_pinched = true;
  gen::Rng rng(1003);
  for (int i = 0; i < 200; ++i) {
    oracle::SeedSpec s = gen::seed(rng, o);
    PathSeed p = oracle::to_seed(s);
    const std::int64_t bound = s.i1 - elliptic_height(p.decomposition()) / 2;
    for (std::int64_t m = 1; m <= 200; ++m)
      if (bott_gap(p, m) < bound) return fail("m = " + std::to_string(m) + ": " + show(s));
  }
  return {true, "200 seeds with i1 >= n - 1, m <= 200"};
}

// ---- criterion 4

Outcome mean_index_rate() {
  gen::SeedOptions o;
  gen::Rng rng(1004);
  for (int i = 0; i < 100; ++i) {
    oracle::SeedSpec s = gen::seed(rng, o);
    PathSeed p = oracle::to_seed(s);
    const Census& c = p.census();
    const std::int64_t K = 3 * c.r + 2 * c.r_star + c.p_minus + c.p_zero + c.q_zero + c.q_plus;
    const Interval mean = mean_index_within(p, Rational(Integer(1), Integer(1) << 60));
    for (std::int64_t m : {10, 100, 1000}) {
      // |i(m) - m mean| <= K certified on both ends of the enclosure.
      const Rational i(index_iterate(p, m));
      if (i - m * mean.hi < -K || i - m * mean.lo > K) return fail("m = " + std::to_string(m) + ": " + show(s));
    }
  }
  return {true, "100 seeds at m = 10, 100, 1000 with enclosure arithmetic"};
}

// ---- criteria 5 and 6

struct System {
  std::vector<oracle::SeedSpec> specs;
  std::vector<PathSeed> seeds;
  int n = 2;
};

std::string show(const System& s) {
  std::string out;
  for (const auto& spec : s.specs) out += show(spec) + "; ";
  return out;
}

std::vector<System> jump_systems() {
  std::vector<System> out;
  gen::Rng rng(1005);
  for (int i = 0; i < 20; ++i) {
    System sys;
    sys.n = 2 + i % 3;
    const int q = 1 + (i / 3) % 3;
    gen::SeedOptions o;
    o.n_min = o.n_max = sys.n;
    o.max_den = 8;
    o.i1_pinched = true;
    while (static_cast<int>(sys.specs.size()) < q) {
      oracle::SeedSpec s = gen::seed(rng, o);
      PathSeed p = oracle::to_seed(s);
      if (compare_mean_index(p, Rational(sys.n - 1)) <= 0) continue;  // need mean index > n - 1
      sys.specs.push_back(s);
      sys.seeds.push_back(std::move(p));
    }
    out.push_back(std::move(sys));
  }
  return out;
}

JumpSearchOptions jump_options() {
  JumpSearchOptions o;
  o.delta = Rational(1, 10);
  o.n_max = kNMax;
  o.limit = 3;
  o.workers = workers();
  return o;
}

struct Found {
  std::vector<System> systems;
  std::vector<std::vector<JumpTuple>> tuples;
};

Found& jump_results() {
  static Found f;
  return f;
}

Outcome jump_tuples() {
  Found& f = jump_results();
  f.systems = jump_systems();
  std::size_t total = 0;
  std::int64_t largest = 0;
  std::string failures;
  for (std::size_t i = 0; i < f.systems.size(); ++i) {
    const System& sys = f.systems[i];
    std::vector<JumpTuple> t;
    try {
      t = find_jump_tuples(sys.seeds, jump_options());
    } catch (const NoTupleFound&) {
    }
    bool ok = t.size() >= 3;
    for (const JumpTuple& j : t) {
      largest = std::max(largest, j.N);
      const std::vector<PathVerification> v = verify_tuple(j, sys.seeds);
      for (const PathVerification& pv : v) ok = ok && pv.passed();
      for (std::size_t k = 0; k < sys.specs.size(); ++k)
        ok = ok && oracle::jump_conditions(sys.specs[k], j.N, j.m[k], 0.1L);
    }
    if (!ok) failures += " #" + std::to_string(i) + " (" + std::to_string(t.size()) + " tuples: " + show(sys) + ")";
    total += t.size();
    f.tuples.push_back(std::move(t));
  }
  if (!failures.empty()) return fail("systems without 3 verified tuples:" + failures);
  return {true, "20 systems (q = 1..3, n = 2..4, delta = 1/10), " + std::to_string(total) +
                    " tuples re-verified and checked by the integer oracle, largest N = " + std::to_string(largest)};
}

Outcome dual_paths() {
  Found& f = jump_results();
  if (f.systems.empty()) return fail("criterion 5 produced no systems");
  std::size_t evaluations = 0, pairs = 0, irrational_systems = 0;
  for (std::size_t i = 0; i < f.systems.size(); ++i) {
    const System& sys = f.systems[i];
    for (const JumpTuple& t : f.tuples[i]) {
      for (std::size_t k = 0; k < sys.seeds.size(); ++k) {
        const PathSeed& s = sys.seeds[k];
        const DeltaReport d = compute_delta(s, t.m[k], t.delta);
        const IterationRow even = iteration_row(s, 2 * t.m[k]);
        if (index_at_even_jump(s, t.N, d.delta_k) != even.index) return fail("index identity, system " + show(sys));
        if (nullity_at_even_jump(s) != even.nullity) return fail("nullity identity, system " + show(sys));
        if (d.delta_k < 0 || d.delta_k > delta_complement_total(s)) return fail("Delta bound, system " + show(sys));
        ++evaluations;
      }
    }
    if (f.tuples[i].empty()) continue;
    bool irrational = false;
    for (const PathSeed& s : sys.seeds) irrational = irrational || s.census().r > s.census().r_rational;
    if (!irrational) continue;
    ++irrational_systems;
    JumpSearchOptions o = jump_options();
    o.limit = 1;
    std::vector<JumpTuple> next;
    try {
      next = find_complementary_tuples(sys.seeds, f.tuples[i].front(), o);
    } catch (const NoTupleFound&) {
      continue;
    }
    for (std::size_t k = 0; k < sys.seeds.size(); ++k) {
      const DeltaReport d = compute_delta(sys.seeds[k], f.tuples[i].front().m[k], o.delta, next.front().m[k]);
      if (d.delta_k + d.delta_k_prime != delta_complement_total(sys.seeds[k]))
        return fail("complement identity, system " + show(sys));
    }
    ++pairs;
  }
  if (pairs == 0) return fail("no complementary pair found");
  return {true, std::to_string(evaluations) + " seed evaluations match both paths; complement identity on " +
                    std::to_string(pairs) + " of " + std::to_string(irrational_systems) +
                    " systems with irrational rotations"};
}

// ---- criterion 7

oracle::SeedSpec peak_seed(gen::Rng& rng) {
  // Blocks whose summands vanish: I2, N1(1,-1), -I2, N1(-1,1), rotations, trivial rational N2.
  std::uniform_int_distribution<int> dim(2, 5), kind(0, 6);
  for (;;) {
    oracle::SeedSpec s;
    s.n = dim(rng);
    int left = s.n - 1;
    bool irrational = false;
    while (left > 0) {
      switch (kind(rng)) {
        case 0: s.blocks.push_back(oracle::n1(1, 0)); break;
        case 1: s.blocks.push_back(oracle::n1(1, -1)); break;
        case 2: s.blocks.push_back(oracle::n1(-1, 0)); break;
        case 3: s.blocks.push_back(oracle::n1(-1, 1)); break;
        case 4: s.blocks.push_back(oracle::rot(gen::rational_angle(rng, 8))); break;
        case 5:
          s.blocks.push_back(oracle::rot(gen::quadratic_angle(rng)));
          irrational = true;
          break;
        default:
          if (left < 2) continue;
          s.blocks.push_back(oracle::n2(gen::rational_angle(rng, 8), true));
          left -= 1;
      }
      left -= 1;
    }
    if (!irrational) continue;
    std::shuffle(s.blocks.begin(), s.blocks.end(), rng);
    s.i1 = std::uniform_int_distribution<int>(s.n - 1, s.n + 2)(rng);
    if (compare_mean_index(oracle::to_seed(s), Rational(s.n - 1)) > 0) return s;
  }
}

// The first tuple of a single seed with every irrational rotation on the low side.
std::optional<JumpTuple> low_tuple(const PathSeed& p) {
  const Census& c = p.census();
  JumpSearchOptions o = jump_options();
  o.limit = 1;
  o.required_sides = std::vector<std::vector<Side>>{
      std::vector<Side>(static_cast<std::size_t>(c.r - c.r_rational), Side::low)};
  std::vector<PathSeed> one{p};
  try {
    return find_jump_tuples(one, o).front();
  } catch (const NoTupleFound&) {
    return std::nullopt;
  }
}

bool violates(const oracle::SeedSpec& mutant, const JumpTuple& fallback) {
  PathSeed p = oracle::to_seed(mutant);
  JumpTuple t = fallback;
  if (compare_mean_index(p, Rational(0)) > 0)
    if (std::optional<JumpTuple> own = low_tuple(p)) t = *own;
  try {
    (void)derive_peak_constraints(p, t, 0, compute_delta(p, t.m[0], t.delta));
  } catch (const ConstraintViolation&) {
    return true;
  }
  return false;
}

Outcome peak_algebra() {
  gen::Rng rng(1007);
  int fixtures = 0, mutants = 0;
  while (fixtures < 20) {
    oracle::SeedSpec s = peak_seed(rng);
    PathSeed p = oracle::to_seed(s);
    std::optional<JumpTuple> t = low_tuple(p);
    if (!t) return fail("no all-low tuple for " + show(s));
    const DeltaReport d = compute_delta(p, t->m[0], t->delta);
    const PeakRecord r = derive_peak_constraints(p, *t, 0, d);
    for (const ConstraintTerm& term : r.terms)
      if (term.value != 0) return fail(term.name + " nonzero for " + show(s));
    if (r.peak_excess != s.n - 1) return fail("excess " + std::to_string(r.peak_excess) + " for " + show(s));
    if (!r.elliptic || r.elliptic_height != 2 * (s.n - 1)) return fail("not elliptic: " + show(s));
    if (r.irrational_rotation_count != d.delta_k) return fail("r - r' != Delta for " + show(s));
    ++fixtures;

    // Swap one block of half dimension 1 for D(2) or N1(-1,-1).
    for (const oracle::BlockSpec& replacement : {oracle::hyp(), oracle::n1(-1, -1)}) {
      oracle::SeedSpec mutant = s;
      auto swap_first = [&](auto pick) {
        for (oracle::BlockSpec& b : mutant.blocks)
          if (pick(b)) {
            b = replacement;
            return true;
          }
        return false;
      };
      if (!swap_first([](const oracle::BlockSpec& b) {
            return b.kind == oracle::BlockSpec::n1 || (b.kind == oracle::BlockSpec::rot && b.angle.rational);
          }))
        swap_first([](const oracle::BlockSpec& b) { return b.kind == oracle::BlockSpec::rot; });
      if (!violates(mutant, *t)) return fail("mutant accepted: " + show(mutant));
      ++mutants;
    }
  }
  return {true, std::to_string(fixtures) + " peak fixtures with a zero constraint set, " + std::to_string(mutants) +
                    " mutants rejected"};
}

// ---- criterion 8

Outcome betti() {
  const std::pair<int, Rational> known[] = {{2, Rational(-1)}, {3, Rational(1)}, {4, Rational(-2, 3)}, {5, Rational(3, 4)}};
  for (const auto& [n, b] : known)
    if (betti_constant(n) != b) return fail("n = " + std::to_string(n));
  for (int n = 2; n <= 12; ++n) {
    const Rational closed = n % 2 == 0 ? Rational(-n) / (2 * (n - 1)) : Rational(n + 1) / (2 * (n - 1));
    if (betti_constant(n) != closed) return fail("closed form at n = " + std::to_string(n));
  }
  return {true, "n = 2..5 values and both closed forms up to n = 12"};
}

// ---- criterion 9

Outcome end_to_end() {
  const std::string cmd = std::string(SYMINDEX_CLI) + " --format json analyze --system " + SYMINDEX_FIXTURES +
                          "/s3_two_irrational.json 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return fail("cannot start the CLI");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return fail("exit status " + std::to_string(status));
  const AnalysisReport r = parse_analysis(out);
  if (!r.success()) return fail("analysis did not reach two geodesics");
  const PeakRecord& a = r.peak_records.front();
  const PeakRecord& b = *r.second_peak_record;
  if (!a.elliptic || !b.elliptic || a.irrational_rotation_count < 1 || b.irrational_rotation_count < 1)
    return fail("geodesics not elliptic with irrational rotations");
  return {true, "exit 0; c_" + std::to_string(a.seed + 1) + " at N = " + std::to_string(r.tuple->N) + " and c_" +
                    std::to_string(b.seed + 1) + " at N = " + std::to_string(r.second_tuple->N) +
                    ", both elliptic with an irrational rotation"};
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "m = 1 consistency", kLimit1, unit_iterate);
  ok &= report(2, "nullity against kernel dimension", kLimit2, nullity_oracle);
  ok &= report(3, "Bott gap", kLimit3, bott_gap_bound);
  ok &= report(4, "mean index rate", kLimit4, mean_index_rate);
  ok &= report(5, "jump tuples", kLimit5, jump_tuples);
  ok &= report(6, "dual-path identities", 0, dual_paths);
  ok &= report(7, "peak constraint algebra", 0, peak_algebra);
  ok &= report(8, "Betti constant", 0, betti);
  ok &= report(9, "end-to-end analyze", kLimit9, end_to_end);
  return ok ? 0 : 1;
}
