#include <benchmark/benchmark.h>

#include <cmath>

#include "mclt/analysis.hpp"
#include "mclt/oracle.hpp"
#include "mclt/sampler.hpp"
#include "mclt/stats.hpp"

namespace {

using namespace mclt;

void BM_SampleSummaryRademacher(benchmark::State& state) {
  const long n = state.range(0);
  const long m = 4096;
  for (auto _ : state) {
    PathSummary s = sample_summary(KernelSpec::rademacher(), n, m, RngPolicy{1});
    benchmark::DoNotOptimize(s.terminal_sums.data());
  }
  state.SetItemsProcessed(state.iterations() * n * m);
}
BENCHMARK(BM_SampleSummaryRademacher)->Arg(1024)->Arg(16384);

void BM_SampleSummaryPaperExample(benchmark::State& state) {
  const long n = state.range(0);
  const long m = 4096;
  const KernelSpec spec = KernelSpec::paper_example(0.75, 0.25);
  for (auto _ : state) {
    PathSummary s = sample_summary(spec, n, m, RngPolicy{1});
    benchmark::DoNotOptimize(s.terminal_sums.data());
  }
  state.SetItemsProcessed(state.iterations() * n * m);
}
BENCHMARK(BM_SampleSummaryPaperExample)->Arg(1024)->Arg(16384);

void BM_EstimateKolmogorov(benchmark::State& state) {
  const long m = state.range(0);
  const PathSummary batch =
      sample_summary(KernelSpec::paper_example(0.75, 0.25), 64, m, RngPolicy{2});
  for (auto _ : state) {
    KolmogorovEstimate d = estimate_kolmogorov(batch.terminal_sums, 8.0, 0.01);
    benchmark::DoNotOptimize(d.d_hat);
  }
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_EstimateKolmogorov)->Arg(100'000)->Arg(1'000'000);

void BM_EnumerateChain(benchmark::State& state) {
  const long n = state.range(0);
  const KernelSpec spec = KernelSpec::paper_example(0.75, 0.25);
  for (auto _ : state) {
    ChainEnumeration chain = enumerate_chain(spec, n);
    benchmark::DoNotOptimize(chain.terminal.data());
  }
}
BENCHMARK(BM_EnumerateChain)->Arg(8)->Arg(12)->Arg(16);

void BM_LambdaCubedSum(benchmark::State& state) {
  const long n = state.range(0);
  const double kappa = std::pow(static_cast<double>(n), 0.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda_cubed_sum(n, kappa));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LambdaCubedSum)->Arg(1'000'000);

}  // namespace

BENCHMARK_MAIN();
