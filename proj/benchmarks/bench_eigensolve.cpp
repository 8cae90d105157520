#include <benchmark/benchmark.h>

#include "ltlab/discretize.hpp"
#include "ltlab/eigensolve.hpp"

namespace {

using namespace ltlab;

OperatorMatrix well_operator(int n) {
  const GridSpec grid{1, 10.0, n, Boundary::Dirichlet};
  PotentialSpec spec;
  spec.terms.push_back(PotentialTerm::gaussian({-8.0, 3.0}, {0.0}, {1.0}));
  return build_operator(grid, sample_potential(spec, grid), Kinetic::Laplacian);
}

void BM_DenseQR(benchmark::State& state) {
  const Eigen::MatrixXcd m = well_operator(static_cast<int>(state.range(0))).dense();
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_dense(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseQR)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNCubed);

void BM_TridiagonalQL(benchmark::State& state) {
  const OperatorMatrix op = well_operator(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(op));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TridiagonalQL)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

void BM_HermitianComparison(benchmark::State& state) {
  const OperatorMatrix op = well_operator(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_combination_eigenvalues(op, 1.0));
}
BENCHMARK(BM_HermitianComparison)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FilterWithEigenvectors(benchmark::State& state) {
  const OperatorMatrix op = well_operator(static_cast<int>(state.range(0)));
  const ComplexSpectrum spectrum = eigenvalues(op);
  FilterContext context;
  context.op = &op;
  for (auto _ : state) benchmark::DoNotOptimize(filter_spectrum(spectrum, op.grid(), FilterPolicy{}, context));
}
BENCHMARK(BM_FilterWithEigenvectors)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
