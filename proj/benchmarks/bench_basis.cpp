#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "physpline/basis.hpp"

using namespace physpline;

static void BM_eval_basis(benchmark::State& state) {
  const TimeGrid grid = TimeGrid::uniform(0.5, 120.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pick(0.0, 120.0);
  std::vector<double> times(1024);
  for (double& t : times) t = pick(rng);

  std::size_t i = 0;
  for (auto _ : state) {
    const double t = times[i++ & 1023];
    benchmark::DoNotOptimize(
        eval_basis(grid, 2 + (i % grid.knot_count()), t, Deriv::position));
  }
}
BENCHMARK(BM_eval_basis);

static void BM_design_matrix(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const TimeGrid grid = TimeGrid::uniform(0.5, 120.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pick(0.0, 120.0);
  std::vector<double> times(rows);
  for (double& t : times) t = pick(rng);

  for (auto _ : state) {
    benchmark::DoNotOptimize(design_matrix(grid, times, Deriv::position));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(rows));
}
BENCHMARK(BM_design_matrix)->Arg(100)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
