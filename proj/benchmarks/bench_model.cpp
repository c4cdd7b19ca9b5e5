#include "bench_util.hpp"
#include "pcc/geometry/point_cloud.hpp"
#include "pcc/models/completion_model.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_CompleteFullModel(benchmark::State& state) {
  pcc::ModelConfig config;
  config.decoder = state.range(0) == 0 ? pcc::DecoderKind::kMlp : pcc::DecoderKind::kMorphing;
  pcc::CompletionModel model(config, 1);
  model.set_training(false);
  const pcc::PointCloud partial = pcc::normalize_cloud(pcc::bench::random_cloud(2048, 9));
  for (auto _ : state) benchmark::DoNotOptimize(model.complete(partial, 2).refined.points.data());
}
BENCHMARK(BM_CompleteFullModel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
