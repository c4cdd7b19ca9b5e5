#include "bench_util.hpp"
#include "pcc/metrics/chamfer.hpp"
#include "pcc/metrics/emd.hpp"

#include <benchmark/benchmark.h>

namespace {

using pcc::bench::random_cloud;

void BM_Chamfer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pcc::PointCloud a = random_cloud(n, 1), b = random_cloud(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pcc::directional_errors(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_Chamfer)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMicrosecond);

void BM_EmdExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pcc::PointCloud a = random_cloud(n, 3), b = random_cloud(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(pcc::emd_exact(a, b).cost);
}
BENCHMARK(BM_EmdExact)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_EmdApprox(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pcc::PointCloud a = random_cloud(n, 5), b = random_cloud(n, 6);
  for (auto _ : state) benchmark::DoNotOptimize(pcc::emd_approx(a, b).cost);
}
BENCHMARK(BM_EmdApprox)->RangeMultiplier(2)->Range(128, 2048)->Unit(benchmark::kMillisecond);

}  // namespace
