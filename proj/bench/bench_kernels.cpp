// Serial reference vs OpenMP for each kernel. Pin threads with
// OMP_NUM_THREADS; on one core the two should be within overhead.
#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "xrsim/channel.hpp"
#include "xrsim/kernels.hpp"

using namespace xrsim::kernels;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "omp"); }

void BM_DeepscMonteCarlo(benchmark::State& state) {
  const DeepscMcInput in{85, 2000, static_cast<std::uint64_t>(state.range(1)), 7};
  const auto snr = xrsim::channel::sweep_points({-20.0, 30.0, 1.0});
  std::vector<double> sse(snr.size());
  for (auto _ : state) {
    deepsc_mc_sse(in, snr, sse, exec_of(state));
    benchmark::DoNotOptimize(sse.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_DeepscMonteCarlo)->ArgsProduct({{0, 1}, {4096}})->Unit(benchmark::kMillisecond);

void BM_AddAwgn(benchmark::State& state) {
  std::vector<double> x(static_cast<std::size_t>(state.range(1)), 0.0);
  for (auto _ : state) {
    if (state.range(0) == 0)
      serial::add_awgn(x, 0.5, 7, 0);
    else
      omp::add_awgn(x, 0.5, 7, 0);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_AddAwgn)->ArgsProduct({{0, 1}, {1 << 20}});

void BM_SumSquares(benchmark::State& state) {
  std::vector<double> x(static_cast<std::size_t>(state.range(1)));
  std::iota(x.begin(), x.end(), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(sum_squares(x, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_SumSquares)->ArgsProduct({{0, 1}, {1 << 22}});

void BM_ProportionalQuotas(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<std::uint64_t> quota(n);
  std::vector<double> frac(n);
  for (auto _ : state) {
    proportional_quotas(w, 1.9e8, quota, frac, exec_of(state));
    benchmark::DoNotOptimize(quota.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_ProportionalQuotas)->ArgsProduct({{0, 1}, {2'000'000}});

}  // namespace

BENCHMARK_MAIN();
