#include <benchmark/benchmark.h>

#include "wigner/ensemble.hpp"
#include "wigner/flow.hpp"
#include "wigner/graph.hpp"
#include "wigner/metropolis.hpp"
#include "wigner/oracle.hpp"
#include "wigner/spectral.hpp"

using namespace wigner;

static void BM_SampleGue(benchmark::State& state) {
  const int n = int(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample(GueSpec{1.0}, n, 1, i++));
}
BENCHMARK(BM_SampleGue)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

static void BM_Eigenvalues(benchmark::State& state) {
  const auto m = sample(GueSpec{1.0}, int(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(m));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

static void BM_TraceMoments(benchmark::State& state) {
  const auto m = sample(GueSpec{1.0}, int(state.range(0)), 3);
  const std::vector<int> ks{2, 4, 6};
  for (auto _ : state) benchmark::DoNotOptimize(normalized_traces(m, ks));
}
BENCHMARK(BM_TraceMoments)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

static void BM_MetropolisSweep(benchmark::State& state) {
  InvariantPotentialSpec pot;
  pot.couplings = {{4, 1.0}};
  MetropolisChain chain(pot, int(state.range(0)), make_stream(4, state.range(0), 0));
  for (auto _ : state) chain.sweep();
  state.counters["acceptance"] = chain.acceptance_rate();
}
BENCHMARK(BM_MetropolisSweep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_CanonicalKey(benchmark::State& state) {
  const auto graphs = enumerate_graphs(4, 4);
  for (auto _ : state)
    for (const auto& g : graphs) benchmark::DoNotOptimize(canonical_key(g));
  state.SetItemsProcessed(state.iterations() * std::int64_t(graphs.size()));
}
BENCHMARK(BM_CanonicalKey)->Unit(benchmark::kMillisecond);

static void BM_OracleGue(benchmark::State& state) {
  const auto spec = CumulantSpec::gaussian(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(exact_trace_moment(spec, state.range(0), 6));
}
BENCHMARK(BM_OracleGue)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_FlowGaussian(benchmark::State& state) {
  FlowTruncation tr;
  tr.max_t = int(state.range(0));
  tr.max_vertices = 8;
  tr.max_edges = 8;
  tr.prune_irrelevant = true;
  for (auto _ : state) benchmark::DoNotOptimize(run_flow(CumulantSpec::gaussian(1.0), tr));
}
BENCHMARK(BM_FlowGaussian)->DenseRange(3, 7, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
