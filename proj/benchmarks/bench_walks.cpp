#include <benchmark/benchmark.h>

#include "hc2/bounds.hpp"
#include "hc2/enumerate.hpp"

namespace {

void BM_CountWalks(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    hc2::WalkTable t = hc2::count_taxi_walks(n);
    benchmark::DoNotOptimize(t.rows.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_CountWalks)->DenseRange(16, 28, 4)->Complexity();

void BM_CountBridges(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    hc2::WalkTable t = hc2::count_walks_and_bridges(n);
    benchmark::DoNotOptimize(t.rows.data());
  }
}
BENCHMARK(BM_CountBridges)->Arg(20)->Arg(24);

void BM_BruteForceOracle(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(hc2::brute_force_walk_count(n));
}
BENCHMARK(BM_BruteForceOracle)->Arg(8)->Arg(10);

void BM_BuildAlmMatrix(benchmark::State& state) {
  for (auto _ : state) {
    hc2::AlmMatrix a = hc2::build_alm_matrix(8, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(a.value.data());
  }
}
BENCHMARK(BM_BuildAlmMatrix)->Arg(20)->Arg(24);

void BM_CertifiedEigenvalue(benchmark::State& state) {
  hc2::AlmMatrix a = hc2::build_alm_matrix(10, 26);
  for (auto _ : state) {
    hc2::EigenEnclosure e = hc2::certified_top_eigenvalue(a, 1e-9);
    benchmark::DoNotOptimize(e.upper);
  }
}
BENCHMARK(BM_CertifiedEigenvalue);

}  // namespace

BENCHMARK_MAIN();
