#include <benchmark/benchmark.h>

#include "ltlab/discretize.hpp"
#include "ltlab/inequalities.hpp"

namespace {

using namespace ltlab;

PotentialSpec two_wells() {
  PotentialSpec spec;
  spec.terms.push_back(PotentialTerm::gaussian({-6.0, 2.0}, {-1.0}, {0.7}));
  spec.terms.push_back(PotentialTerm::box({-3.0, -1.0}, {1.5}, {0.5}));
  return spec;
}

void BM_BuildOperator(benchmark::State& state) {
  const GridSpec grid{1, 10.0, static_cast<int>(state.range(0)), Boundary::Dirichlet};
  const auto spec = two_wells();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_operator(grid, sample_potential(spec, grid, Sampling::CellAverage), Kinetic::Laplacian));
  }
}
BENCHMARK(BM_BuildOperator)->Arg(1000)->Arg(4000);

void BM_RelativisticOperator(benchmark::State& state) {
  const GridSpec grid{1, 10.0, static_cast<int>(state.range(0)), Boundary::Periodic};
  const auto v = sample_potential(two_wells(), grid);
  for (auto _ : state) benchmark::DoNotOptimize(build_operator(grid, v, Kinetic::Relativistic));
}
BENCHMARK(BM_RelativisticOperator)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_ExclusionRaster(benchmark::State& state) {
  const GridSpec grid{1, 10.0, 400, Boundary::Dirichlet};
  const auto v = sample_potential(two_wells(), grid);
  const int side = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        exclusion_region(v, 1.0, ConstantMode::scaled(2.0), {-40.0, 40.0, -40.0, 40.0}, {side, side}, true));
  }
}
BENCHMARK(BM_ExclusionRaster)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
