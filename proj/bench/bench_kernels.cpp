// Serial reference vs OpenMP variant of each kernel. The second argument
// selects the execution mode (0 serial, 1 parallel).

#include <benchmark/benchmark.h>

#include <random>

#include "prefboard/core/matrix.hpp"
#include "prefboard/kernels/kernels.hpp"

using namespace prefboard;
using kernels::Execution;

namespace {

DenseMatrix unit_rows(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DenseMatrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : m.row(i)) x = g(rng);
    l2_normalize(m.row(i));
  }
  return m;
}

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

void set_label(benchmark::State& state) {
  state.SetLabel(state.range(1) == 0 ? "serial"
                                     : "parallel x" + std::to_string(kernels::max_threads()));
}

void BM_CoreDistances(benchmark::State& state) {
  const auto m = unit_rows(static_cast<std::size_t>(state.range(0)), 5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::core_distances(m, 20, mode(state)));
  set_label(state);
}

void BM_MutualReachabilityMst(benchmark::State& state) {
  const auto m = unit_rows(static_cast<std::size_t>(state.range(0)), 5, 2);
  const auto core = kernels::core_distances(m, 20, Execution::serial);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::mutual_reachability_mst(m, core, mode(state)));
  set_label(state);
}

void BM_RowDots(benchmark::State& state) {
  const auto m = unit_rows(static_cast<std::size_t>(state.range(0)), 1025, 3);
  const auto w = unit_rows(1, 1025, 4);
  std::vector<double> out(m.rows());
  for (auto _ : state) {
    kernels::row_dots(m, w.row(0), out, mode(state));
    benchmark::DoNotOptimize(out.data());
  }
  set_label(state);
}

void BM_AssignNearest(benchmark::State& state) {
  const auto pts = unit_rows(static_cast<std::size_t>(state.range(0)), 16, 5);
  const auto cents = unit_rows(32, 16, 6);
  std::vector<int> labels(pts.rows());
  std::vector<double> sq(pts.rows());
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::assign_nearest(pts, cents, labels, sq, mode(state)));
  }
  set_label(state);
}

}  // namespace

BENCHMARK(BM_CoreDistances)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MutualReachabilityMst)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RowDots)->ArgsProduct({{2000, 20000}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AssignNearest)->ArgsProduct({{10000, 100000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
