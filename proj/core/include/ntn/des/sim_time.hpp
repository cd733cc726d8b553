#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

namespace ntn::des {

/// Simulated time (or duration) with microsecond resolution.
///
/// Every timing constant of the processing model is a whole number of
/// microseconds, so integer ticks keep delay sums exact and event ordering
/// reproducible.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_us(std::int64_t us) { return SimTime(us); }
  static SimTime from_ms(double ms) { return SimTime(std::llround(ms * 1000.0)); }
  static SimTime from_seconds(double s) { return SimTime(std::llround(s * 1'000'000.0)); }
  static constexpr SimTime zero() { return SimTime(0); }
  static constexpr SimTime max() { return SimTime(std::numeric_limits<std::int64_t>::max()); }

  constexpr std::int64_t us() const { return us_; }
  constexpr double ms() const { return static_cast<double>(us_) / 1000.0; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1'000'000.0; }

  constexpr SimTime& operator+=(SimTime o) {
    us_ += o.us_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    us_ -= o.us_;
    return *this;
  }
  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime(a.us_ + b.us_); }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime(a.us_ - b.us_); }
  friend constexpr SimTime operator*(SimTime a, std::int64_t k) { return SimTime(a.us_ * k); }
  friend constexpr auto operator<=>(SimTime, SimTime) = default;

 private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

}  // namespace ntn::des
