#include <benchmark/benchmark.h>

#include "ncsurf/harmonic.hpp"

using namespace ncsurf;

namespace {

// A fresh basis per iteration so the memo does not hide the construction cost.
void BM_BuildTopHarmonic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    HarmonicBasis basis;
    benchmark::DoNotOptimize(&basis.P(n, 0));
  }
}
BENCHMARK(BM_BuildTopHarmonic)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_NormCheck(benchmark::State& state) {
  HarmonicBasis basis;
  const int n = static_cast<int>(state.range(0));
  basis.P(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(basis.norm_check(n, n));
}
BENCHMARK(BM_NormCheck)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace
