#include "symindex/jump_finder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "symindex/errors.hpp"

namespace symindex {

namespace {

constexpr std::int64_t kChunk = 1 << 15;

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  __int128 l = static_cast<__int128>(a / g) * b;
  if (l > (static_cast<__int128>(1) << 62)) throw InvalidInput("angle period overflows 62 bits");
  return static_cast<std::int64_t>(l);
}

// Every circle eigenvalue angle of the normal form, one per conjugate pair.
std::vector<ExactAngle> circle_angles(const Decomposition& d) {
  std::vector<ExactAngle> out = d.rotation_angles();
  out.insert(out.end(), d.nontrivial_n2_angles().begin(), d.nontrivial_n2_angles().end());
  out.insert(out.end(), d.trivial_n2_angles().begin(), d.trivial_n2_angles().end());
  return out;
}

Interval closeness_value(const ExactAngle& x, std::int64_t m, int budget) {
  Interval f = frac_mul(x, 2 * m, Rational(Integer(1), Integer(1) << 40), budget);
  const Rational half(1, 2);
  if (f.hi <= half) return f;
  if (f.lo >= half) return {1 - f.hi, 1 - f.lo};
  return f;
}

ConditionRecord relation(std::string name, const char* rel, std::int64_t lhs, std::int64_t rhs, std::string detail = {}) {
  bool pass = false;
  const std::string r = rel;
  if (r == "==") pass = lhs == rhs;
  if (r == "<=") pass = lhs <= rhs;
  if (r == ">=") pass = lhs >= rhs;
  return {std::move(name), r, Interval(Rational(lhs)), Interval(Rational(rhs)), pass, std::move(detail)};
}

// Per-seed scan state: caches keyed by m so that consecutive N sharing the
// same lattice point reuse the iteration evaluations.
class SeedScanner {
 public:
  SeedScanner(const PathSeed& seed, std::int64_t period, const Rational& delta, const std::vector<Side>* sides,
              int budget)
      : seed_(seed),
        period_(period),
        delta_(delta),
        sides_(sides),
        budget_(budget),
        angles_(circle_angles(seed.decomposition())),
        i1_(seed.initial_index()),
        nu1_(seed.initial_nullity()),
        s_plus_(splitting_plus_at_one(seed.decomposition())),
        half_e_(elliptic_height(seed.decomposition()) / 2) {
    Interval mean = mean_index(seed, 0);
    mean_exact_ = mean.exact();
    if (mean_exact_) {
      mean_num_ = to_int64(mean.lo.get_num());
      mean_den_ = to_int64(mean.lo.get_den());
    }
    mean_lo_d_ = std::nextafter(mean.lo.get_d(), -1.0);
    mean_hi_d_ = std::nextafter(mean.hi.get_d(), INFINITY);
  }

  std::int64_t base(std::int64_t N) {
    if (mean_exact_) {
      __int128 num = static_cast<__int128>(N) * mean_den_;
      __int128 den = static_cast<__int128>(period_) * mean_num_;
      __int128 q = num / den;
      if (num % den != 0 && (num < 0) != (den < 0)) --q;
      return static_cast<std::int64_t>(q);
    }
    if (mean_lo_d_ > 0) {
      constexpr double slack = 1.0 / static_cast<double>(std::int64_t{1} << 50);
      const double lo = static_cast<double>(N) / (static_cast<double>(period_) * mean_hi_d_) * (1.0 - slack);
      const double hi = static_cast<double>(N) / (static_cast<double>(period_) * mean_lo_d_) * (1.0 + slack);
      const double f = std::floor(lo);
      if (f + 1.0 > hi) return static_cast<std::int64_t>(f);
    }
    return jump_base(seed_, N, period_, budget_);
  }

  bool accepts(std::int64_t N, std::int64_t m) {
    if (index_after(m) != 2 * N + i1_) return false;
    const Local& local = local_eval(m);
    if (!local.ok) return false;
    if (local.i_before + local.nu_before != 2 * N - (i1_ + 2 * s_plus_ - nu1_)) return false;
    if (local.i_even < 2 * N - half_e_) return false;
    if (local.i_even + local.nu_even > 2 * N + half_e_) return false;
    return true;
  }

  void forget_below(std::int64_t m) {
    after_.erase(after_.begin(), after_.lower_bound(m));
    local_.erase(local_.begin(), local_.lower_bound(m));
  }

 private:
  struct Local {
    bool ok = false;
    std::int64_t i_before = 0, nu_before = 0, i_even = 0, nu_even = 0;
  };

  std::int64_t index_after(std::int64_t m) {
    auto it = after_.find(m);
    if (it != after_.end()) return it->second;
    std::int64_t v = index_iterate(seed_, 2 * m + 1, budget_);
    after_.emplace(m, v);
    return v;
  }

  const Local& local_eval(std::int64_t m) {
    auto it = local_.find(m);
    if (it != local_.end()) return it->second;
    Local l;
    l.ok = nullity_iterate(seed_, 2 * m - 1, budget_) == nu1_ && nullity_iterate(seed_, 2 * m + 1, budget_) == nu1_;
    for (std::size_t j = 0; l.ok && j < angles_.size(); ++j)
      l.ok = closeness_side(angles_[j], m, delta_, budget_) != Side::far;
    if (l.ok && sides_) l.ok = rotation_sides(seed_, m, delta_, budget_) == *sides_;
    if (l.ok) {
      l.i_before = index_iterate(seed_, 2 * m - 1, budget_);
      l.nu_before = nu1_;
      l.i_even = index_iterate(seed_, 2 * m, budget_);
      l.nu_even = nullity_iterate(seed_, 2 * m, budget_);
    }
    return local_.emplace(m, l).first->second;
  }

  const PathSeed& seed_;
  std::int64_t period_;
  Rational delta_;
  const std::vector<Side>* sides_;
  int budget_;
  std::vector<ExactAngle> angles_;
  std::int64_t i1_, nu1_, s_plus_, half_e_;
  bool mean_exact_ = false;
  std::int64_t mean_num_ = 0, mean_den_ = 1;
  double mean_lo_d_ = 0, mean_hi_d_ = 0;
  std::map<std::int64_t, std::int64_t> after_;
  std::map<std::int64_t, Local> local_;
};

void validate_search(std::span<const PathSeed> seeds, const JumpSearchOptions& options) {
  if (seeds.empty()) throw InvalidInput("jump search needs at least one seed");
  if (options.delta <= 0 || options.delta >= Rational(1, 2)) throw InvalidInput("delta must lie in (0, 1/2)");
  if (options.n_min < 1 || options.n_max < options.n_min) throw InvalidInput("need 1 <= n_min <= n_max");
  if (options.limit == 0) throw InvalidInput("limit must be positive");
  if (options.required_sides && options.required_sides->size() != seeds.size())
    throw InvalidInput("required_sides needs one entry per seed");
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    if (compare_mean_index(seeds[k], Rational(0), options.budget) <= 0)
      throw InvalidInput("seed #" + std::to_string(k + 1) + " has non-positive mean index; jump tuples need it > 0");
  }
}

class RangeScanner {
 public:
  RangeScanner(std::span<const PathSeed> seeds, std::int64_t period, const JumpSearchOptions& options)
      : seeds_(seeds), period_(period), options_(options) {
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const std::vector<Side>* sides = options.required_sides ? &(*options.required_sides)[k] : nullptr;
      scanners_.emplace_back(seeds[k], period, options.delta, sides, options.budget);
    }
  }

  // Tuples with N in [begin, end), in (N, chi) order, at most `cap`.
  std::vector<JumpTuple> scan(std::int64_t begin, std::int64_t end, std::size_t cap) {
    std::vector<JumpTuple> found;
    const std::size_t q = seeds_.size();
    std::vector<std::vector<int>> choices(q);
    for (std::int64_t N = begin; N < end && found.size() < cap; ++N) {
      if (std::find(options_.exclude.begin(), options_.exclude.end(), N) != options_.exclude.end()) continue;
      bool viable = true;
      std::vector<std::int64_t> bases(q);
      for (std::size_t k = 0; k < q && viable; ++k) {
        choices[k].clear();
        bases[k] = scanners_[k].base(N);
        for (int chi = 0; chi <= 1; ++chi) {
          const std::int64_t m = (bases[k] + chi) * period_;
          if (m >= 1 && scanners_[k].accepts(N, m)) choices[k].push_back(chi);
        }
        viable = !choices[k].empty();
        if (bases[k] > 2) scanners_[k].forget_below((bases[k] - 2) * period_);
      }
      if (!viable) continue;

      std::vector<std::size_t> pick(q, 0);
      while (found.size() < cap) {
        JumpTuple t;
        t.N = N;
        t.period = period_;
        t.delta = options_.delta;
        for (std::size_t k = 0; k < q; ++k) {
          t.chi.push_back(choices[k][pick[k]]);
          t.m.push_back((bases[k] + t.chi.back()) * period_);
        }
        t.per_path = verify_tuple(t, seeds_, options_.budget);
        if (!t.verified()) throw std::logic_error("scan accepted a tuple that fails independent verification");
        found.push_back(std::move(t));
        // Odometer over the choices, last seed fastest.
        bool done = true;
        for (std::size_t k = q; k-- > 0;) {
          if (++pick[k] < choices[k].size()) {
            done = false;
            break;
          }
          pick[k] = 0;
        }
        if (done) break;
      }
    }
    return found;
  }

 private:
  std::span<const PathSeed> seeds_;
  std::int64_t period_;
  const JumpSearchOptions& options_;
  std::vector<SeedScanner> scanners_;
};

bool tuple_order(const JumpTuple& a, const JumpTuple& b) {
  if (a.N != b.N) return a.N < b.N;
  return a.chi < b.chi;
}

}  // namespace

std::string to_string(Side side) {
  switch (side) {
    case Side::zero:
      return "zero";
    case Side::low:
      return "low";
    case Side::high:
      return "high";
    case Side::far:
      break;
  }
  return "far";
}

Side flipped(Side side) {
  if (side == Side::low) return Side::high;
  if (side == Side::high) return Side::low;
  return side;
}

Side closeness_side(const ExactAngle& x, std::int64_t m, const Rational& delta, int budget) {
  const std::int64_t mult = 2 * m;
  if (x.is_rational()) {
    Rational v = x.exact_value() * mult;
    Rational f = v - floor_of(v);
    if (f == 0) return Side::zero;
    if (f < delta) return Side::low;
    if (f > 1 - delta) return Side::high;
    return Side::far;
  }
  const std::int64_t k = floor_mul(x, mult, budget);
  if (compare_mul(x, mult, Rational(k) + delta, budget) < 0) return Side::low;
  if (compare_mul(x, mult, Rational(k + 1) - delta, budget) > 0) return Side::high;
  return Side::far;
}

std::vector<Side> rotation_sides(const PathSeed& seed, std::int64_t m, const Rational& delta, int budget) {
  std::vector<Side> out;
  for (const ExactAngle& x : seed.decomposition().rotation_angles())
    if (!x.is_rational()) out.push_back(closeness_side(x, m, delta, budget));
  return out;
}

bool PathVerification::passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionRecord& c) { return c.pass; });
}

bool JumpTuple::verified() const {
  return !per_path.empty() &&
         std::all_of(per_path.begin(), per_path.end(), [](const PathVerification& p) { return p.passed(); });
}

std::int64_t angle_period(std::span<const PathSeed> seeds) {
  if (seeds.empty()) throw InvalidInput("angle period needs at least one seed");
  std::int64_t period = 1;
  for (const PathSeed& seed : seeds) {
    for (const ExactAngle& x : circle_angles(seed.decomposition())) {
      if (!x.is_rational()) continue;
      Rational two_x = x.exact_value() * 2;
      period = checked_lcm(period, to_int64(two_x.get_den()));
    }
  }
  return period;
}

std::int64_t jump_base(const PathSeed& seed, std::int64_t N, std::int64_t period, int budget) {
  int limit = budget;
  for (const ExactAngle& x : seed.decomposition().rotation_angles())
    if (!x.is_rational()) limit = std::min(limit, x.max_step());
  for (int s = 0; s <= limit; ++s) {
    Interval mean = mean_index(seed, s);
    if (mean.lo <= 0) continue;
    Rational q_lo = Rational(N) / (Rational(period) * mean.hi);
    Rational q_hi = Rational(N) / (Rational(period) * mean.lo);
    Integer k = floor_of(q_lo);
    if (mean.exact() || k + 1 > q_hi) return to_int64(k);
  }
  throw Undecidable("cannot certify [N / (M * mean index)] for N = " + std::to_string(N) + " within " +
                    std::to_string(limit) + " refinements");
}

std::vector<PathVerification> verify_tuple(const JumpTuple& tuple, std::span<const PathSeed> seeds, int budget) {
  if (seeds.empty()) throw InvalidInput("verification needs at least one seed");
  if (tuple.m.size() != seeds.size() || tuple.chi.size() != seeds.size())
    throw InvalidInput("tuple has " + std::to_string(tuple.m.size()) + " iterates for " + std::to_string(seeds.size()) +
                       " seeds");
  if (tuple.N < 1) throw InvalidInput("tuple N must be positive");
  const std::int64_t period = angle_period(seeds);

  std::vector<PathVerification> out;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const PathSeed& s = seeds[k];
    const std::int64_t m = tuple.m[k];
    const std::int64_t N = tuple.N;
    PathVerification v;
    v.conditions.push_back(relation("period", "==", tuple.period, period));
    if (m < 1 || (tuple.chi[k] != 0 && tuple.chi[k] != 1)) {
      v.conditions.push_back(relation("lattice", "==", m, -1, "iterate must be positive and chi in {0, 1}"));
      out.push_back(std::move(v));
      continue;
    }
    v.conditions.push_back(relation("lattice", "==", m, (jump_base(s, N, period, budget) + tuple.chi[k]) * period));

    const std::int64_t i1 = index_iterate(s, 1, budget);
    const std::int64_t nu1 = nullity_iterate(s, 1, budget);
    const std::int64_t s_plus = splitting_plus_at_one(s.decomposition());
    const std::int64_t half_e = elliptic_height(s.decomposition()) / 2;
    const IterationRow before = iteration_row(s, 2 * m - 1, budget);
    const IterationRow even = iteration_row(s, 2 * m, budget);
    const IterationRow after = iteration_row(s, 2 * m + 1, budget);

    v.conditions.push_back(relation("nullity_before", "==", before.nullity, nu1));
    v.conditions.push_back(relation("nullity_after", "==", after.nullity, nu1));
    v.conditions.push_back(
        relation("index_nullity_before", "==", before.index + before.nullity, 2 * N - (i1 + 2 * s_plus - nu1)));
    v.conditions.push_back(relation("index_after", "==", after.index, 2 * N + i1));
    v.conditions.push_back(relation("index_lower", ">=", even.index, 2 * N - half_e));
    v.conditions.push_back(relation("index_nullity_upper", "<=", even.index + even.nullity, 2 * N + half_e));

    if (s.census().q_minus + s.census().q_zero + s.census().q_plus > 0) {
      v.conditions.push_back(ConditionRecord{"rotation_closeness", "<", Interval(Rational(0)), Interval(tuple.delta),
                                             true, "eigenvalue -1"});
    }
    for (const ExactAngle& x : circle_angles(s.decomposition())) {
      const Side side = closeness_side(x, m, tuple.delta, budget);
      v.conditions.push_back(ConditionRecord{"rotation_closeness", "<", closeness_value(x, m, budget),
                                             Interval(tuple.delta), side != Side::far,
                                             "angle " + x.describe() + " side " + to_string(side)});
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<JumpTuple> find_jump_tuples(std::span<const PathSeed> seeds, const JumpSearchOptions& options) {
  validate_search(seeds, options);
  const std::int64_t period = angle_period(seeds);
  const int workers = std::max(1, options.workers);

  std::vector<RangeScanner> scanners;
  for (int w = 0; w < workers; ++w) scanners.emplace_back(seeds, period, options);

  std::vector<JumpTuple> found;
  std::int64_t next = options.n_min;
  while (next <= options.n_max && found.size() < options.limit) {
    const std::size_t want = options.limit - found.size();
    std::vector<std::vector<JumpTuple>> parts(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t begin = next + w * kChunk;
      const std::int64_t end = std::min(options.n_max + 1, begin + kChunk);
      ranges.emplace_back(begin, std::max(begin, end));
    }
    auto run = [&](int w) {
      try {
        auto [b, e] = ranges[static_cast<std::size_t>(w)];
        if (b < e) parts[static_cast<std::size_t>(w)] = scanners[static_cast<std::size_t>(w)].scan(b, e, want);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& part : parts)
      for (auto& t : part) found.push_back(std::move(t));
    std::sort(found.begin(), found.end(), tuple_order);
    if (found.size() > options.limit) found.resize(options.limit);
    next = ranges.back().second;
    if (options.progress) options.progress(next - 1, options.n_max, found.size());
  }
  if (found.empty()) {
    throw NoTupleFound("no jump tuple with N in [" + std::to_string(options.n_min) + ", " +
                       std::to_string(options.n_max) + "] (delta = " + format_exact(options.delta) +
                       "); widen n_max or relax delta");
  }
  return found;
}

std::vector<JumpTuple> find_complementary_tuples(std::span<const PathSeed> seeds, const JumpTuple& first,
                                                 JumpSearchOptions options) {
  if (first.m.size() != seeds.size()) throw InvalidInput("first tuple does not match the seed list");
  std::vector<std::vector<Side>> sides;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    std::vector<Side> s = rotation_sides(seeds[k], first.m[k], first.delta, options.budget);
    for (Side& side : s) side = flipped(side);
    sides.push_back(std::move(s));
  }
  options.delta = first.delta;
  options.required_sides = std::move(sides);
  options.exclude.push_back(first.N);
  return find_jump_tuples(seeds, options);
}

std::int64_t delta_complement_total(const PathSeed& seed) {
  const Census& c = seed.census();
  return (c.r - c.r_rational) + 2 * (c.r_star - c.r_star_rational);
}

namespace {

std::int64_t delta_count(const PathSeed& seed, std::int64_t m, const Rational& delta, int budget) {
  std::int64_t total = 0;
  for (const BasicForm& block : seed.decomposition().blocks()) {
    for (const SpectralPoint& omega : circle_spectrum(block)) {
      const ExactAngle* x = omega.angle();
      if (!x) continue;
      const int s_minus = splitting_numbers(block, omega).minus;
      if (s_minus == 0) continue;
      if (closeness_side(*x, m, delta, budget) == Side::low) total += s_minus;
    }
  }
  return total;
}

}  // namespace

DeltaReport compute_delta(const PathSeed& seed, std::int64_t m_k, const Rational& delta,
                          std::optional<std::int64_t> complementary_m, int budget) {
  if (m_k < 1) throw InvalidInput("m_k must be positive");
  DeltaReport report;
  report.delta_k = delta_count(seed, m_k, delta, budget);
  if (complementary_m) {
    report.delta_k_prime = delta_count(seed, *complementary_m, delta, budget);
    report.prime_measured = true;
  } else {
    report.delta_k_prime = delta_complement_total(seed) - report.delta_k;
  }
  report.c_k = c_total(seed.decomposition());
  report.s_plus = splitting_plus_at_one(seed.decomposition());
  return report;
}

std::int64_t index_at_even_jump(const PathSeed& seed, std::int64_t N, std::int64_t delta_k) {
  return 2 * N - splitting_plus_at_one(seed.decomposition()) - c_total(seed.decomposition()) + 2 * delta_k;
}

}  // namespace symindex
