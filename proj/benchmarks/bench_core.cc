#include <benchmark/benchmark.h>

#include "hausmeter/families.hpp"
#include "hausmeter/generation.hpp"

using namespace hausmeter;

static void BM_enumerate_generation(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::geometric(0.5), 4);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::uint64_t count = 0;
    for_each_cylinder(sys, depth, [&](const Cylinder&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
  state.SetItemsProcessed(state.iterations() * generation_size(sys, depth));
}
BENCHMARK(BM_enumerate_generation)->Arg(4)->Arg(8)->Arg(10);

static void BM_word_derivative_bounds(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::gauss(), 8);
  Word w;
  for (int i = 0; i < state.range(0); ++i) w.letters.push_back(i % 8 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(word_derivative_bounds(sys, w));
}
BENCHMARK(BM_word_derivative_bounds)->Arg(2)->Arg(8)->Arg(16);

static void BM_apply_word(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::gauss(), 8);
  Word w;
  for (int i = 0; i < 12; ++i) w.letters.push_back(i % 8 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(apply_word(sys, w, 0.37));
}
BENCHMARK(BM_apply_word);
