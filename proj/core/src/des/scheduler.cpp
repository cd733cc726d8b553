#include "ntn/des/scheduler.hpp"

#include <stdexcept>
#include <string>

namespace ntn::des {

std::uint64_t Scheduler::schedule(SimTime at, EventKind kind, Endpoint target, Action action) {
  if (at < now_) {
    throw std::invalid_argument("cannot schedule an event in the past (" + std::to_string(at.us()) +
                                "us < now " + std::to_string(now_.us()) + "us)");
  }
  const std::uint64_t seq = next_sequence_++;
  queue_.push(Event{EventRecord{at, seq, kind, target}, std::move(action)});
  return seq;
}

void Scheduler::run_until(SimTime t_end) {
  while (!queue_.empty() && queue_.top().record.fire_time <= t_end) {
    // Moved out before popping so the action may schedule further events.
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    now_ = ev.record.fire_time;
    ++fired_;
    if (trace_) trace_(ev.record);
    if (ev.action) ev.action();
  }
  if (t_end > now_) now_ = t_end;
}

}  // namespace ntn::des
