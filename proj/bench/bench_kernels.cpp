// Serial reference kernels against the OpenMP versions on square tori and
// on the sphere. The thread count comes from the benchmark argument.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ricci_spectra/flow.hpp"
#include "ricci_spectra/grid.hpp"
#include "ricci_spectra/kernels.hpp"

using namespace ricci;

namespace {

Background make_background(int n) { return n > 0 ? Background::flat_torus(n, n) : Background::round_sphere(-n); }

std::vector<double> smooth_field(const Background& bg) {
  std::vector<double> v(bg.size());
  for (int j = 0; j < bg.ny(); ++j)
    for (int i = 0; i < bg.nx(); ++i)
      v[static_cast<std::size_t>(j) * bg.nx() + i] = 0.2 * std::cos(bg.x(i)) + 0.1 * std::sin(bg.y(j));
  return v;
}

template <auto Kernel>
void BM_Laplacian(benchmark::State& state) {
  const Background bg = make_background(static_cast<int>(state.range(0)));
  kernels::set_thread_count(static_cast<int>(state.range(1)));
  const auto phi = smooth_field(bg);
  std::vector<double> out(bg.size());
  for (auto _ : state) {
    Kernel(bg, phi, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(bg.size()));
}

template <auto Kernel>
void BM_SecondDerivatives(benchmark::State& state) {
  const Background bg = make_background(static_cast<int>(state.range(0)));
  kernels::set_thread_count(static_cast<int>(state.range(1)));
  const auto phi = smooth_field(bg);
  std::vector<double> xx(bg.size()), xy(bg.size()), yy(bg.size());
  for (auto _ : state) {
    Kernel(bg, phi, xx, xy, yy);
    benchmark::DoNotOptimize(xx.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(bg.size()));
}

template <auto Kernel>
void BM_FlowVelocity(benchmark::State& state) {
  const Background bg = make_background(static_cast<int>(state.range(0)));
  kernels::set_thread_count(static_cast<int>(state.range(1)));
  const auto u = smooth_field(bg);
  std::vector<double> out(bg.size());
  for (auto _ : state) {
    Kernel(bg, u, 0.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(bg.size()));
}

void BM_FlowStep(benchmark::State& state) {
  const Background bg = make_background(static_cast<int>(state.range(0)));
  kernels::set_thread_count(static_cast<int>(state.range(1)));
  const FlowState s{0.0, ConformalMetric(bg, ScalarField(smooth_field(bg)))};
  const double dt = stable_time_step(s.g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(flow_step(s, dt, FlowMode::Ricci));
}

// {grid, threads}; a negative grid means a sphere with that many nodes.
void Grids(benchmark::internal::Benchmark* b) {
  for (int n : {128, 512, -4096}) b->Args({n, 1});
}

void GridsThreads(benchmark::internal::Benchmark* b) {
  for (int n : {128, 512, -4096})
    for (int t : {1, 2, 4}) b->Args({n, t});
}

}  // namespace

BENCHMARK(BM_Laplacian<kernels::reference::background_laplacian>)->Name("laplacian/reference")->Apply(Grids);
BENCHMARK(BM_Laplacian<kernels::parallel::background_laplacian>)->Name("laplacian/parallel")->Apply(GridsThreads);
BENCHMARK(BM_SecondDerivatives<kernels::reference::second_derivatives>)
    ->Name("second_derivatives/reference")
    ->Apply(Grids);
BENCHMARK(BM_SecondDerivatives<kernels::parallel::second_derivatives>)
    ->Name("second_derivatives/parallel")
    ->Apply(GridsThreads);
BENCHMARK(BM_FlowVelocity<kernels::reference::flow_velocity>)->Name("flow_velocity/reference")->Apply(Grids);
BENCHMARK(BM_FlowVelocity<kernels::parallel::flow_velocity>)->Name("flow_velocity/parallel")->Apply(GridsThreads);
BENCHMARK(BM_FlowStep)->Name("rk4_step/parallel")->Apply(GridsThreads);

BENCHMARK_MAIN();
