#include <benchmark/benchmark.h>

#include "moser/gcdlab.hpp"
#include "moser/powersum.hpp"

namespace {

using namespace moser;

void BM_BernoulliTable(benchmark::State& state) {
  const auto k = static_cast<Index>(state.range(0));
  for (auto _ : state) {
    BernoulliTable table;
    table.extend_to(k);
    benchmark::DoNotOptimize(table.at(k));
  }
}
BENCHMARK(BM_BernoulliTable)->Arg(50)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_PowerSumFaulhaber(benchmark::State& state) {
  BernoulliTable table;
  table.extend_to(40);
  FaulhaberPolynomial s(40, table);
  const Integer m = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(s(m));
}
BENCHMARK(BM_PowerSumFaulhaber)->Arg(100)->Arg(10'000)->Arg(1'000'000);

void BM_PowerSumNaive(benchmark::State& state) {
  const Integer m = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(power_sum_naive(40, m));
}
BENCHMARK(BM_PowerSumNaive)->Arg(100)->Arg(10'000);

void BM_GkScan(benchmark::State& state) {
  auto ctx = make_context(20);
  const long m_max = state.range(0);
  for (auto _ : state) {
    for (long m = 2; m <= m_max; ++m) benchmark::DoNotOptimize(g_k(ctx, m));
  }
  state.SetItemsProcessed(state.iterations() * (m_max - 1));
}
BENCHMARK(BM_GkScan)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_MinMaxScan(benchmark::State& state) {
  auto ctx = make_context(18);  // window reaches |N_18| = 43867
  for (auto _ : state) benchmark::DoNotOptimize(min_max_scan(ctx, ctx.abs_n()));
}
BENCHMARK(BM_MinMaxScan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
