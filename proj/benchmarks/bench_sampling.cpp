#include "bench_util.hpp"
#include "pcc/geometry/sampling.hpp"

#include <benchmark/benchmark.h>

namespace {

using pcc::bench::random_cloud;

void BM_FarthestPointSample(benchmark::State& state) {
  const pcc::PointCloud cloud = random_cloud(3072, 7);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pcc::farthest_point_sample(cloud, k, 1).indices.data());
}
BENCHMARK(BM_FarthestPointSample)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_MinimumDensitySample(benchmark::State& state) {
  const pcc::PointCloud cloud = random_cloud(3072, 8);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pcc::minimum_density_sample(cloud, k, pcc::kDefaultDensitySigma, 1).indices.data());
  }
}
BENCHMARK(BM_MinimumDensitySample)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace
