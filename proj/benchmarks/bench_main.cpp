#include <benchmark/benchmark.h>

#include "qlab/curvature.hpp"
#include "qlab/operators.hpp"
#include "qlab/q_paneitz.hpp"
#include "qlab/random_fields.hpp"
#include "qlab/spectral.hpp"
#include "qlab/variations.hpp"

using namespace qlab;

namespace {

MetricField metric(int n, int res) {
  return random_perturbed_metric(Grid(n, res), {2, 0.05, 1});
}

// Arguments are (dimension, points per axis).
void grid_args(benchmark::internal::Benchmark* b) {
  b->Args({3, 16})->Args({3, 24})->Args({3, 32})->Args({4, 12})->Args({4, 16});
}

void BM_PartialDerivative(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const ScalarField f = random_scalar(g, {2, 1.0, 2});
  for (auto _ : state) benchmark::DoNotOptimize(partial_derivative(f, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_PartialDerivative)->Apply(grid_args)->Unit(benchmark::kMicrosecond);

void BM_Prolong(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), res = static_cast<int>(state.range(1));
  const MetricField m = metric(n, res);
  const Grid fine(n, 2 * res);
  for (auto _ : state) benchmark::DoNotOptimize(prolong(m, fine));
}
BENCHMARK(BM_Prolong)->Args({3, 16})->Args({4, 12})->Unit(benchmark::kMillisecond);

void BM_Christoffel(benchmark::State& state) {
  const MetricField m = metric(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(christoffel(m));
}
BENCHMARK(BM_Christoffel)->Apply(grid_args)->Unit(benchmark::kMillisecond);

void BM_Curvature(benchmark::State& state) {
  const Geometry geo(metric(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
  for (auto _ : state) benchmark::DoNotOptimize(curvature(geo));
}
BENCHMARK(BM_Curvature)->Apply(grid_args)->Unit(benchmark::kMillisecond);

void BM_QCurvature(benchmark::State& state) {
  const MetricField m = metric(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(q_curvature(m));
}
BENCHMARK(BM_QCurvature)->Apply(grid_args)->Unit(benchmark::kMillisecond);

void BM_Paneitz(benchmark::State& state) {
  const Geometry geo(metric(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
  const ScalarField f = random_scalar(geo.grid(), {2, 1.0, 3});
  for (auto _ : state) benchmark::DoNotOptimize(paneitz(geo, f));
}
BENCHMARK(BM_Paneitz)->Apply(grid_args)->Unit(benchmark::kMillisecond);

void BM_Background(benchmark::State& state) {
  const MetricField m = metric(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(Background(m));
}
BENCHMARK(BM_Background)->Apply(grid_args)->Unit(benchmark::kMillisecond);

void BM_Gamma(benchmark::State& state) {
  const Background bg(metric(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
  const SymTensor2Field h = random_sym2(bg.grid(), {2, 1.0, 4});
  for (auto _ : state) benchmark::DoNotOptimize(gamma(bg, h));
}
BENCHMARK(BM_Gamma)->Apply(grid_args)->Unit(benchmark::kMillisecond);

void BM_GammaStar(benchmark::State& state) {
  const Background bg(metric(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
  const ScalarField f = random_scalar(bg.grid(), {2, 1.0, 5});
  for (auto _ : state) benchmark::DoNotOptimize(gamma_star(bg, f));
}
BENCHMARK(BM_GammaStar)->Apply(grid_args)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
