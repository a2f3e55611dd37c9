#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace gutinstinct {

using Duration = std::chrono::milliseconds;
using Timestamp = std::chrono::sys_time<Duration>;

constexpr std::int64_t to_millis(Timestamp t) noexcept {
  return t.time_since_epoch().count();
}

constexpr Timestamp from_millis(std::int64_t ms) noexcept {
  return Timestamp{Duration{ms}};
}

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override {
    return std::chrono::time_point_cast<Duration>(std::chrono::system_clock::now());
  }
};

/// Test clock. Every call to now() returns the current value and then
/// advances it by `step`, so consecutive operations get distinct times.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start = from_millis(1'700'000'000'000), Duration step = Duration{0})
      : ms_(to_millis(start)), step_(step.count()) {}

  Timestamp now() const override { return from_millis(ms_.fetch_add(step_)); }

  void set(Timestamp t) { ms_.store(to_millis(t)); }
  void advance(Duration d) { ms_.fetch_add(d.count()); }

 private:
  mutable std::atomic<std::int64_t> ms_;
  std::int64_t step_;
};

}  // namespace gutinstinct
