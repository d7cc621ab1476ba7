#ifndef CORAL_BUFFERS_POSE_BUFFER_HPP_
#define CORAL_BUFFERS_POSE_BUFFER_HPP_

#include <cstdint>
#include <mutex>
#include <vector>

#include "coral/buffers/errors.hpp"
#include "coral/wire/pose.hpp"

namespace coral::buffers {

// Delay-alignment buffer for poses: stores a sliding window of timestamped
// samples so a consumer can ask "where was the camera t_c ago?" and place
// the (delayed) camera feed at the pose it was actually captured from.
//
// Timestamps must be strictly increasing. Queries land between stored
// samples and are answered by linear interpolation of the position and
// spherical-linear (shortest-arc) interpolation of the orientation. Pushes
// and queries may come from different threads.
class PoseDelayBuffer {
 public:
  // capacity: ring size in entries; must be at least 2 so a query can be
  // bracketed. Size it as ceil(t_c / sample period) + 1 or more.
  // delay_us: the configured t_c.
  PoseDelayBuffer(std::size_t capacity, std::uint64_t delay_us);

  // Appends a sample; evicts the oldest when full.
  void push(std::uint64_t timestamp_us, const wire::PosePayload& pose);

  // Returns the pose at (now_us - delay). The buffer must span that instant:
  // oldest timestamp <= now - delay <= newest timestamp.
  wire::PosePayload query(std::uint64_t now_us) const;

  std::size_t size() const;
  std::uint64_t delay_us() const { return delay_us_; }

 private:
  struct Entry {
    std::uint64_t timestamp_us = 0;
    wire::PosePayload pose;
  };

  const Entry& at(std::size_t logical) const {
    return ring_[(head_ + logical) % ring_.size()];
  }

  mutable std::mutex mutex_;
  std::vector<Entry> ring_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  std::uint64_t delay_us_;
};

}  // namespace coral::buffers

#endif  // CORAL_BUFFERS_POSE_BUFFER_HPP_
