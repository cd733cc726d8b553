#include <benchmark/benchmark.h>

#include "ntn/scenario/build.hpp"
#include "ntn/scenario/config.hpp"

namespace {

void run_scenario(benchmark::State& state, ntn::entities::Protocol protocol) {
  ntn::scenario::ScenarioConfig cfg;
  cfg.protocol = protocol;
  cfg.ue_count = state.range(0);
  for (auto _ : state) {
    auto sim = ntn::scenario::build_simulation(cfg);
    auto result = sim->run();
    benchmark::DoNotOptimize(result.events_fired);
  }
}

void BM_SimulationHo(benchmark::State& state) { run_scenario(state, ntn::entities::Protocol::Ho); }
void BM_SimulationGho(benchmark::State& state) { run_scenario(state, ntn::entities::Protocol::Gho); }

BENCHMARK(BM_SimulationHo)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulationGho)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
