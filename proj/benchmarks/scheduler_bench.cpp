#include <benchmark/benchmark.h>

#include "ntn/des/node_queue.hpp"
#include "ntn/des/scheduler.hpp"

namespace {

using ntn::des::Endpoint;
using ntn::des::EventKind;
using ntn::des::SimTime;

void BM_SchedulerScheduleAndRun(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    ntn::des::Scheduler s;
    std::int64_t fired = 0;
    // Interleaved times so the heap actually reorders.
    for (std::int64_t i = 0; i < n; ++i) {
      s.schedule(SimTime::from_us((i * 7919) % n), EventKind::TimerExpiry, Endpoint::ue(0), [&] { ++fired; });
    }
    s.run_until(SimTime::from_us(n));
    benchmark::DoNotOptimize(fired);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SchedulerScheduleAndRun)->Arg(1 << 10)->Arg(1 << 16);

void BM_NodeQueueSaturated(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    ntn::des::NodeQueue q(500, 4);
    for (std::int64_t i = 0; i < n; ++i) {
      ntn::des::Message m;
      m.id = static_cast<std::uint64_t>(i);
      m.cls = i % 3 == 0 ? ntn::des::MessageClass::AttachRequest : ntn::des::MessageClass::UeRequest;
      auto admitted = q.enqueue(std::move(m), SimTime::from_us(i));
      benchmark::DoNotOptimize(admitted);
      if (i % 2 == 0) benchmark::DoNotOptimize(q.complete(SimTime::from_us(i)));
    }
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_NodeQueueSaturated)->Arg(1 << 14);

}  // namespace
