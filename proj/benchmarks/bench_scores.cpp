#include <benchmark/benchmark.h>

#include "bench_support.hpp"
#include "cham/affinity.hpp"
#include "cham/oracle.hpp"
#include "cham/scores.hpp"

namespace {

using namespace cham;

void BM_BuildAffinity(benchmark::State& state) {
  const auto k = static_cast<Eigen::Index>(state.range(0));
  EmbeddingMatrix x = bench::random_embedding(k, 512, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_affinity(x));
  }
}
BENCHMARK(BM_BuildAffinity)->Arg(8)->Arg(32)->Arg(64)->Arg(128);

void BM_KrlsDirect(benchmark::State& state) {
  const auto k = static_cast<Eigen::Index>(state.range(0));
  AffinityMatrix omega = build_affinity(bench::random_embedding(k, 2 * k, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(krls_direct(omega, 10.0));
  }
}
BENCHMARK(BM_KrlsDirect)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_KrlsEigen(benchmark::State& state) {
  const auto k = static_cast<Eigen::Index>(state.range(0));
  AffinityMatrix omega = build_affinity(bench::random_embedding(k, 2 * k, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(krls_eigen(omega, 10.0));
  }
}
BENCHMARK(BM_KrlsEigen)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_StatisticalLeverage(benchmark::State& state) {
  const auto k = static_cast<Eigen::Index>(state.range(0));
  EmbeddingMatrix x = bench::random_embedding(k, 512, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(statistical_leverage(x));
  }
}
BENCHMARK(BM_StatisticalLeverage)->Arg(8)->Arg(32)->Arg(64);

void BM_ChristoffelValues(benchmark::State& state) {
  const auto k = static_cast<Eigen::Index>(state.range(0));
  AffinityMatrix omega = build_affinity(bench::random_embedding(k, 2 * k, 5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(christoffel_values(omega, 10.0));
  }
}
BENCHMARK(BM_ChristoffelValues)->Arg(8)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
