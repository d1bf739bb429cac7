#include <benchmark/benchmark.h>

#include <random>

#include "ncsurf/cli/suites.hpp"
#include "ncsurf/ncalg.hpp"

using namespace ncsurf;

namespace {

Word random_word(std::mt19937_64& rng, int len) {
  static const Letter letters[] = {Letter::Zero, Letter::Plus, Letter::Minus};
  std::uniform_int_distribution<int> pick(0, 2);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(letters[pick(rng)]);
  return w;
}

void BM_ReduceWordSphere(benchmark::State& state) {
  const SurfaceProfile s = cli::formal_sphere();
  std::mt19937_64 rng(7);
  std::vector<Word> words;
  for (int i = 0; i < 64; ++i) words.push_back(random_word(rng, static_cast<int>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(reduce_word(words[i++ % words.size()], s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ReduceWordSphere)->DenseRange(2, 10, 2)->Complexity();

void BM_MulRandomProfile(benchmark::State& state) {
  const SurfaceProfile s = cli::random_exact_profile(11);
  std::mt19937_64 rng(9);
  const NCPoly a = reduce_word(random_word(rng, 6), s);
  const NCPoly b = reduce_word(random_word(rng, 6), s);
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b, s));
}
BENCHMARK(BM_MulRandomProfile);

}  // namespace
