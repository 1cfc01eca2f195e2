#include <benchmark/benchmark.h>

#include "hausmeter/dimension.hpp"

using namespace hausmeter;

static void BM_solve_moran(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::geometric(0.5), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_moran(sys));
}
BENCHMARK(BM_solve_moran)->Arg(2)->Arg(64)->Arg(1024);

static void BM_solve_moran_luroth(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::luroth(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_moran(sys));
}
BENCHMARK(BM_solve_moran_luroth)->Arg(64);

static void BM_solve_pressure_gauss(benchmark::State& state) {
  const auto sys = build_system(FamilySpec::gauss(), 2);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_pressure(sys, depth));
}
BENCHMARK(BM_solve_pressure_gauss)->Arg(4)->Arg(8)->Arg(12);

static void BM_gap_bound_power(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(dim_gap_bound(FamilySpec::power(1.0), 100, 0.9));
}
BENCHMARK(BM_gap_bound_power);
