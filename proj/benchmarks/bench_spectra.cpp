#include <benchmark/benchmark.h>

#include <cmath>

#include "ncsurf/repr.hpp"
#include "ncsurf/spectra.hpp"

using namespace ncsurf;

namespace {

void BM_CrystalEigenvalues(benchmark::State& state) {
  const int twok = static_cast<int>(state.range(0));
  const double k = twok / 2.0;
  const Rep r = rep_spin(Spin::from_twice(twok), {{"alpha", 1.0}, {"epsilon", 1.0}, {"R", std::sqrt(k * (k + 1))}});
  const Tridiag t = crystal_matrix(r);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(t));
  state.SetComplexityN(twok + 1);
}
BENCHMARK(BM_CrystalEigenvalues)->RangeMultiplier(4)->Range(8, 2048)->Complexity();

void BM_ModeSequence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cn_sequence(0, {0.7, 0.0}, 1.0, 1.0, n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ModeSequence)->RangeMultiplier(10)->Range(1000, 100000)->Complexity(benchmark::oN);

}  // namespace
