#include "newtonflux/catalog.hpp"
#include "newtonflux/flux.hpp"
#include "newtonflux/symfun.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace newtonflux;

namespace {

Matrix random_symmetric(int n) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> G(0.0, 1.0);
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = G(rng);
  return A;
}

void BM_ElemSym(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = 0.1 * (i + 1);
  for (auto _ : state) benchmark::DoNotOptimize(elem_sym(v));
}
BENCHMARK(BM_ElemSym)->DenseRange(2, 8, 2);

void BM_JacobiEigen(benchmark::State& state) {
  const Matrix A = random_symmetric(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(A));
}
BENCHMARK(BM_JacobiEigen)->DenseRange(2, 6, 1);

void BM_NewtonTransforms(benchmark::State& state) {
  const Matrix A = random_symmetric(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(newton_transforms(A));
}
BENCHMARK(BM_NewtonTransforms)->DenseRange(2, 6, 1);

void BM_CurvatureAt(benchmark::State& state) {
  const CatalogEntry e = euclidean_cap(static_cast<int>(state.range(0)), 2.0, 1.0);
  const Vector u = e.M().domain().center();
  for (auto _ : state) benchmark::DoNotOptimize(curvature_at(e.M(), u));
}
BENCHMARK(BM_CurvatureAt)->Arg(2)->Arg(3);

void BM_CurvatureAtFiniteDifference(benchmark::State& state) {
  const CatalogEntry e = make_entry("perturbed_euclidean_cap:n=2,R=2,rho=1,amp=0.05,seed=1");
  const Vector u = e.M().domain().center();
  for (auto _ : state) benchmark::DoNotOptimize(curvature_at(e.M(), u));
}
BENCHMARK(BM_CurvatureAtFiniteDifference);

void BM_DivergenceNewtonField(benchmark::State& state) {
  const CatalogEntry e = make_entry("perturbed_tangent_graph:n=2,rho=1,k=0.5,amp=0.05,seed=1");
  const Vector u = e.M().domain().center();
  for (auto _ : state) benchmark::DoNotOptimize(newton_field_divergence(e.M(), u, 1));
}
BENCHMARK(BM_DivergenceNewtonField);

void BM_FluxKilling(benchmark::State& state) {
  const CatalogEntry e = euclidean_cap(2, 2.0, 1.0);
  FluxOptions options;
  options.order = static_cast<int>(state.range(0));
  options.refine = false;
  for (auto _ : state) benchmark::DoNotOptimize(flux_killing(e.config, e.killing_fields.front(), 1, options));
}
BENCHMARK(BM_FluxKilling)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_HrEstimate(benchmark::State& state) {
  const CatalogEntry e = hyperbolic_cap(HyperbolicKind::geodesic_sphere, 2, 1.0, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(hr_estimate(e.config, 1));
}
BENCHMARK(BM_HrEstimate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
