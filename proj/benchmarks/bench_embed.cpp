#include <benchmark/benchmark.h>

#include <string>

#include "bench_support.hpp"
#include "cham/embedder.hpp"
#include "cham/sample_set.hpp"

namespace {

using namespace cham;

std::string lorem_bytes(std::size_t n, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  std::string s;
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(i % 8 == 7 ? ' '
                           : static_cast<char>('a' + rng.next_bounded(26)));
  }
  return s;
}

void BM_EmbedText(benchmark::State& state) {
  EmbedderSpec spec;
  const std::string doc = lorem_bytes(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(embed_text(doc, spec));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_EmbedText)->Arg(256)->Arg(4096)->Arg(65536);

void BM_AggregateDomain(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  SampleEmbeddingSet set;
  set.domain = "bench";
  Xoshiro256ss rng(11);
  set.vectors.resize(n, 512);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < 512; ++c) {
      set.vectors(r, c) = static_cast<float>(rng.next_double());
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(aggregate_domain(set));
  }
}
BENCHMARK(BM_AggregateDomain)->Arg(256)->Arg(1024)->Arg(4096);

void BM_SubsampleDomain(benchmark::State& state) {
  SampleEmbeddingSet set;
  set.domain = "bench";
  set.vectors = SampleMatrix::Zero(16384, 64);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(subsample_domain(set, n, 42));
  }
}
BENCHMARK(BM_SubsampleDomain)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
