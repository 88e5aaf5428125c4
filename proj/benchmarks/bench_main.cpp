// Micro-benchmarks for the heavy paths: four-axis operator assembly,
// one-axis matrix-vector application, leapfrog stepping, and the dense
// exponential behind finite translations.

#include <array>

#include <benchmark/benchmark.h>

#include "dpsqm/klein_gordon.hpp"
#include "dpsqm/lattice.hpp"
#include "dpsqm/poincare.hpp"

namespace {

using namespace dpsqm;

void BM_Assemble4D(benchmark::State& state) {
  const int n_max = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_kg_operator_4d(n_max, 1.0));
  }
}
BENCHMARK(BM_Assemble4D)->DenseRange(3, 6);

void BM_ApplySharp1D(benchmark::State& state) {
  const int n_max = int(state.range(0));
  const SparseReal sharp = build_delta_sharp(n_max);
  const VecReal v = VecReal::LinSpaced(n_max + 1, 0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply(sharp, v));
  }
  state.SetItemsProcessed(state.iterations() * (n_max + 1));
}
BENCHMARK(BM_ApplySharp1D)->RangeMultiplier(4)->Range(64, 1024);

void BM_LeapfrogSteps(benchmark::State& state) {
  const int n_max = 6;
  const int steps = 64;
  const SparseReal k = assemble_spatial_kg_generator(n_max, 1.0);
  const Eigenmode mode = spatial_eigenmodes(k).front();
  const VecReal zero = VecReal::Zero(mode.vector.size());
  const double dt = 0.05 * max_stable_dt(k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_leapfrog(k, mode.vector, zero, dt, steps));
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_LeapfrogSteps);

void BM_ExpmTranslation(benchmark::State& state) {
  const int n_max = int(state.range(0));
  const std::array<double, 4> c{0.1, 0.2, 0.0, 0.05};
  const std::array<double, 6> no_rotation{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_finite_transform(n_max, c, no_rotation));
  }
}
BENCHMARK(BM_ExpmTranslation)->DenseRange(4, 5);

}  // namespace

BENCHMARK_MAIN();
