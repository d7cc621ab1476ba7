#ifndef CORAL_CLOCK_HPP_
#define CORAL_CLOCK_HPP_

#include <chrono>
#include <cstdint>
#include <thread>

namespace coral {

using SteadyClock = std::chrono::steady_clock;

// Process-wide monotonic epoch. All wire timestamps are microseconds since
// this epoch, so they are comparable within one process but not across
// machines.
inline SteadyClock::time_point process_epoch() {
  static const SteadyClock::time_point epoch = SteadyClock::now();
  return epoch;
}

inline std::uint64_t now_us() {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(SteadyClock::now() -
                                                            process_epoch())
          .count());
}

inline SteadyClock::time_point time_point_from_us(std::uint64_t us) {
  return process_epoch() + std::chrono::microseconds(us);
}

inline void sleep_until_us(std::uint64_t us) {
  std::this_thread::sleep_until(time_point_from_us(us));
}

// Frame pacer: coarse sleep, then busy-wait the last stretch. Scheduler
// wakeups on a contended core overshoot by milliseconds; the spin tail keeps
// pacing error at tens of microseconds for the price of <1 ms of CPU.
inline void pace_until_us(std::uint64_t us, std::uint64_t spin_us = 800) {
  if (us > spin_us) sleep_until_us(us - spin_us);
  while (now_us() < us) {
  }
}

}  // namespace coral

#endif  // CORAL_CLOCK_HPP_
