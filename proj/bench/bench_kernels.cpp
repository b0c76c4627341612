// Serial references against the OpenMP kernels. Thread count is the second range argument.
#include <random>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "mott/hamiltonian.hpp"
#include "mott/observables.hpp"
#include "mott/reference.hpp"
#include "mott/timeofflight.hpp"

using namespace mott;

namespace {

Eigen::VectorXcd random_vector(std::size_t n) {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v;
}

void BM_matvec_reference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto b = Basis::enumerate(Statistics::distinguishable, n);
  const auto h = build_hamiltonian({n, 0.5, 1.6, Statistics::distinguishable}, *b);
  const auto x = random_vector(b->dimension());
  for (auto _ : state) benchmark::DoNotOptimize(reference::apply(h, x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.nnz()));
}

void BM_matvec_parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  auto b = Basis::enumerate(Statistics::distinguishable, n);
  const auto h = build_hamiltonian({n, 0.5, 1.6, Statistics::distinguishable}, *b);
  const auto x = random_vector(b->dimension());
  Eigen::VectorXcd y(x.size());
  for (auto _ : state) {
    h.apply(std::span<const cplx>(x.data(), static_cast<std::size_t>(x.size())),
            std::span<cplx>(y.data(), static_cast<std::size_t>(y.size())));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.nnz()));
}

TofParams curve_params(int points) {
  TofParams p;
  p.grid = default_grid(p, points);
  return p;
}

void BM_corr2_reference(benchmark::State& state) {
  const auto s = reference_mi_sym(Basis::enumerate(Statistics::distinguishable, 4));
  const auto p = curve_params(static_cast<int>(state.range(0)));
  for (auto _ : state)
    for (double x : p.grid) {
      const double det[2] = {0.0, x};
      benchmark::DoNotOptimize(reference::coincidence_density(s, det, p));
    }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_corr2_parallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(1)));
  const auto s = reference_mi_sym(Basis::enumerate(Statistics::distinguishable, 4));
  const auto p = curve_params(static_cast<int>(state.range(0)));
  const double fixed[1] = {0.0};
  for (auto _ : state) benchmark::DoNotOptimize(coincidence_curve(s, fixed, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_hamiltonian_build(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  auto b = Basis::enumerate(Statistics::distinguishable, n);
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian({n, 0.5, 1.6, Statistics::distinguishable}, *b));
}

}  // namespace

BENCHMARK(BM_matvec_reference)->Arg(6)->Arg(7)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matvec_parallel)->ArgsProduct({{6, 7}, {1, 2, 4}})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_corr2_reference)->Arg(101)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_corr2_parallel)->ArgsProduct({{101, 801}, {1, 2, 4}})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hamiltonian_build)->ArgsProduct({{6, 7}, {1, 2, 4}})->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
