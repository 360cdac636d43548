// Serial reference versus the OpenMP replication loop on a bundled scenario.

#include <benchmark/benchmark.h>

#include "uavtrust/monte_carlo.hpp"
#include "uavtrust/scenario.hpp"

namespace {

uavtrust::ScenarioSpec bench_spec(std::size_t reps) {
  auto spec = uavtrust::resolve_scenario("wind+gps-spoof");
  spec.replications = reps;
  return spec;
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(uavtrust::run_monte_carlo_serial(spec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloParallel(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(uavtrust::run_monte_carlo(spec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_MonteCarloSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
