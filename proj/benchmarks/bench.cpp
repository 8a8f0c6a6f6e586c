#include <benchmark/benchmark.h>

#include "symindex/jump_finder.hpp"

using namespace symindex;

namespace {

PathSeed seed(int n, std::int64_t i1, std::vector<BasicForm> blocks) {
  Decomposition d(n, std::move(blocks));
  const Census& c = d.census();
  return PathSeed(i1, c.p_minus + 2 * c.p_zero + c.p_plus, std::move(d));
}

ExactAngle golden() { return ExactAngle::quadratic(-1, 1, 2, 5); }
ExactAngle silver() { return ExactAngle::quadratic(-1, 1, 1, 2); }

void floor_rational(benchmark::State& state) {
  const ExactAngle x = ExactAngle::rational(5, 12);
  std::int64_t m = 1;
  for (auto _ : state) benchmark::DoNotOptimize(floor_mul(x, m++));
}
BENCHMARK(floor_rational);

void floor_quadratic(benchmark::State& state) {
  const ExactAngle x = golden();
  std::int64_t m = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(floor_mul(x, m++));
}
BENCHMARK(floor_quadratic)->Arg(1)->Arg(1000000)->Arg(std::int64_t{1} << 40);

void index_seed(benchmark::State& state) {
  const PathSeed s = seed(6, 5,
                          {make_rotation(golden()), make_n1(-1, -1), make_n2(ExactAngle::rational(2, 7), false),
                           make_rotation(ExactAngle::rational(5, 12))});
  std::int64_t m = 1;
  for (auto _ : state) benchmark::DoNotOptimize(iteration_row(s, m++));
}
BENCHMARK(index_seed);

void jump_scan(benchmark::State& state) {
  const std::vector<PathSeed> seeds{seed(3, 2, {make_n1(1, 0), make_rotation(golden())}),
                                    seed(3, 2, {make_n1(1, 0), make_rotation(silver())})};
  JumpSearchOptions o;
  o.delta = Rational(1, 20);
  o.limit = static_cast<std::size_t>(state.range(0));
  o.n_max = 100000000;
  o.workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(find_jump_tuples(seeds, o));
}
BENCHMARK(jump_scan)->Args({1, 1})->Args({10, 1})->Args({10, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
