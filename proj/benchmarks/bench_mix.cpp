#include <benchmark/benchmark.h>

#include "bench_support.hpp"
#include "cham/mixer.hpp"

namespace {

using namespace cham;

MixtureWeights uniform_weights(int k) {
  MixtureWeights w;
  w.values = Eigen::VectorXd::Constant(k, 1.0 / k);
  for (int i = 0; i < k; ++i) {
    w.labels.push_back("d" + std::to_string(i));
  }
  return w;
}

void BM_SampleDomain(benchmark::State& state) {
  const MixtureWeights w = uniform_weights(static_cast<int>(state.range(0)));
  Xoshiro256ss rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_domain(w, rng));
  }
}
BENCHMARK(BM_SampleDomain)->Arg(2)->Arg(16)->Arg(128);

void BM_MixStream(benchmark::State& state) {
  const int k = 8;
  MixPlan plan;
  plan.weights = uniform_weights(k);
  plan.seed = 17;
  plan.length = static_cast<std::uint64_t>(state.range(0));
  std::vector<RecordSource> sources;
  for (int i = 0; i < k; ++i) {
    RecordSource src;
    src.name = plan.weights.labels[static_cast<std::size_t>(i)];
    for (int r = 0; r < 64; ++r) {
      src.records.push_back("payload-" + std::to_string(r));
    }
    sources.push_back(std::move(src));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix_stream(sources, plan));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_MixStream)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
