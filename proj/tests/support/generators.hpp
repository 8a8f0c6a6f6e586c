#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "oracle.hpp"

namespace gen {

using Rng = std::mt19937_64;

struct SeedOptions {
  int n_min = 2;
  int n_max = 6;
  int max_den = 12;          // rational angles p/q with q <= max_den
  double irrational = 0.3;   // chance that a circle angle is quadratic irrational
  bool hyperbolic = true;
  bool n2 = true;
  std::int64_t i1_min = -3;  // i1 is drawn from [i1_min, i1_max]
  std::int64_t i1_max = 8;
  bool i1_pinched = false;   // draw i1 from [n - 1, n - 1 + 4] instead
};

oracle::AngleSpec rational_angle(Rng& rng, int max_den);
oracle::AngleSpec quadratic_angle(Rng& rng);
oracle::AngleSpec angle(Rng& rng, const SeedOptions& o);
oracle::SeedSpec seed(Rng& rng, const SeedOptions& o);

// Runs `property` on `count` generated cases; the first failure is returned
// as a message naming the case number and its description, empty on success.
template <class Case>
std::string for_all(int count, std::uint64_t seed_value, const std::function<Case(Rng&)>& generate,
                    const std::function<std::string(const Case&)>& property,
                    const std::function<std::string(const Case&)>& show) {
  Rng rng(seed_value);
  for (int i = 0; i < count; ++i) {
    Case c = generate(rng);
    std::string failure = property(c);
    if (!failure.empty()) return "case " + std::to_string(i) + " (" + show(c) + "): " + failure;
  }
  return {};
}

}  // namespace gen
