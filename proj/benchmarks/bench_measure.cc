#include <benchmark/benchmark.h>

#include "hausmeter/measure.hpp"

using namespace hausmeter;

static void BM_interval_measure(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::luroth(), static_cast<int>(state.range(0)));
  const Enclosure h = solve_moran(sys).h;
  for (auto _ : state)
    benchmark::DoNotOptimize(interval_measure({&sys, h, 0.137, 0.731, 1e-10}));
}
BENCHMARK(BM_interval_measure)->Arg(4)->Arg(16)->Arg(64);

static void BM_sup_density(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::geometric(0.5), static_cast<int>(state.range(0)));
  const Enclosure h = solve_moran(sys).h;
  for (auto _ : state)
    benchmark::DoNotOptimize(sup_density(sys, h, 4, 100000, true));
}
BENCHMARK(BM_sup_density)->Arg(2)->Arg(8)->Arg(32);

static void BM_cover_sum(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::geometric(0.5), 10);
  const double h = solve_moran(sys).h.mid();
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cover_sum(sys, h, l));
}
BENCHMARK(BM_cover_sum)->Arg(3)->Arg(5)->Arg(6);
