// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "covert/bench.hpp"

using namespace covert;

namespace {

const DetectionPair kPair{1.0, 2.0};

void BM_MdepMonteCarloParallel(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mdep_monte_carlo(kPair, n, 7).estimate);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_MdepMonteCarloSerial(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mdep_monte_carlo_serial(kPair, n, 7).estimate);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

Scenario sweep_scenario() {
  Scenario s;
  s.num_elements = 8;
  s.num_antennas = 2;
  return s;
}

const std::vector<double> kGrid{0.0, 20.0};
const std::vector<SchemeKind> kSchemes{SchemeKind::proposed_A_FD, SchemeKind::HD};

void BM_SweepParallel(benchmark::State& state) {
  const Scenario s = sweep_scenario();
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sweep(SweepParameter::jam_budget, kGrid, s, kSchemes, trials, 3).records.size());
}

void BM_SweepSerial(benchmark::State& state) {
  const Scenario s = sweep_scenario();
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sweep_serial(SweepParameter::jam_budget, kGrid, s, kSchemes, trials, 3).records.size());
}

}  // namespace

BENCHMARK(BM_MdepMonteCarloParallel)->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_MdepMonteCarloSerial)->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
