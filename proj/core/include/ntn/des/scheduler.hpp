#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "ntn/des/message.hpp"
#include "ntn/des/sim_time.hpp"

namespace ntn::des {

enum class EventKind : std::uint8_t { MessageArrival, TimerExpiry, ProcessorFree, TriggerCheck };

/// What the trace hook sees for every fired event.
struct EventRecord {
  SimTime fire_time;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::MessageArrival;
  Endpoint target;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Single-threaded event loop ordered by (fire_time, scheduling sequence).
class Scheduler {
 public:
  using Action = std::function<void()>;
  using TraceHook = std::function<void(const EventRecord&)>;

  SimTime now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t fired() const { return fired_; }

  /// Throws std::invalid_argument when `at` lies in the past.
  std::uint64_t schedule(SimTime at, EventKind kind, Endpoint target, Action action);

  std::uint64_t schedule_after(SimTime delay, EventKind kind, Endpoint target, Action action) {
    return schedule(now_ + delay, kind, target, std::move(action));
  }

  /// Fires every event with fire_time <= t_end, then sets the clock to t_end.
  void run_until(SimTime t_end);

  void set_trace(TraceHook hook) { trace_ = std::move(hook); }

 private:
  struct Event {
    EventRecord record;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.record.fire_time != b.record.fire_time) return a.record.fire_time > b.record.fire_time;
      return a.record.sequence > b.record.sequence;
    }
  };

  SimTime now_;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t fired_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  TraceHook trace_;
};

}  // namespace ntn::des
