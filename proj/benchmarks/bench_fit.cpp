#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "physpline/costs.hpp"
#include "physpline/solver.hpp"

using namespace physpline;

namespace {

// 10k measurements over 120 s at grid_dt 0.5 gives K = 241 knots, the scale
// where assembly should dominate the solve.
MeasurementSet large_track(std::size_t count, double duration) {
  std::vector<Measurement> ms;
  ms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t =
        duration * static_cast<double>(i) / static_cast<double>(count - 1);
    ms.push_back(Measurement::position(t, 10.0 * t + std::sin(t),
                                       0.5 * t * t, 1.0));
  }
  return MeasurementSet(std::move(ms));
}

}  // namespace

static void BM_assemble(benchmark::State& state) {
  const MeasurementSet meas =
      large_track(static_cast<std::size_t>(state.range(0)), 120.0);
  FitConfig config;
  const TimeGrid grid = grid_for(meas, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(meas, config, grid));
  }
}
BENCHMARK(BM_assemble)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_solve(benchmark::State& state) {
  const MeasurementSet meas =
      large_track(static_cast<std::size_t>(state.range(0)), 120.0);
  FitConfig config;
  const NormalEquations ne = assemble(meas, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(ne));
  }
}
BENCHMARK(BM_solve)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
