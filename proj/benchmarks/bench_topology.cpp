#include <benchmark/benchmark.h>

#include "hc2/dynamics.hpp"
#include "hc2/hardcore.hpp"
#include "hc2/topology.hpp"

namespace {

void BM_ClassifyGrid(benchmark::State& state) {
  hc2::Region r = hc2::Region::grid(5, 5);
  hc2::DiamondGraph dg(r);
  std::vector<hc2::Configuration> states = hc2::enumerate_configurations(r);
  std::size_t i = 0;
  for (auto _ : state) {
    const hc2::Configuration& c = states[i++ % states.size()];
    benchmark::DoNotOptimize(hc2::classify(c, dg).cls);
  }
}
BENCHMARK(BM_ClassifyGrid);

void BM_CrossParityTorus(benchmark::State& state) {
  hc2::Region r = hc2::Region::torus(6);
  hc2::Configuration cb = hc2::checkerboard(r, 0);
  for (auto _ : state) benchmark::DoNotOptimize(hc2::cross_parity_of(cb));
}
BENCHMARK(BM_CrossParityTorus);

void BM_FirstFaultTorus(benchmark::State& state) {
  hc2::Configuration empty(hc2::Region::torus(6));
  hc2::DiamondGraph dg(empty.region);
  for (auto _ : state)
    benchmark::DoNotOptimize(hc2::find_first_fault(empty, dg).length);
}
BENCHMARK(BM_FirstFaultTorus);

void BM_GlauberStep(benchmark::State& state) {
  hc2::Region r = hc2::Region::torus(8);
  hc2::GibbsParams p{4.0};
  hc2::ChainState s = hc2::make_chain(r, 11);
  for (auto _ : state) {
    hc2::transition_step(s, p);
    benchmark::DoNotOptimize(s.config.mask);
  }
}
BENCHMARK(BM_GlauberStep);

void BM_ExactChain3x3(benchmark::State& state) {
  for (auto _ : state) {
    hc2::ExactChain chain =
        hc2::exact_transition_matrix(hc2::Region::grid(3, 3), hc2::Rational(2));
    benchmark::DoNotOptimize(chain.states.data());
  }
}
BENCHMARK(BM_ExactChain3x3);

}  // namespace

BENCHMARK_MAIN();
