#include "coral/buffers/pose_buffer.hpp"

#include <Eigen/Geometry>
#include <string>

namespace coral::buffers {

PoseDelayBuffer::PoseDelayBuffer(std::size_t capacity, std::uint64_t delay_us)
    : delay_us_(delay_us) {
  if (capacity < 2) {
    throw NonPositiveInput("pose buffer capacity must be at least 2, got " +
                           std::to_string(capacity));
  }
  ring_.resize(capacity);
}

void PoseDelayBuffer::push(std::uint64_t timestamp_us,
                           const wire::PosePayload& pose) {
  std::lock_guard lock(mutex_);
  if (count_ > 0) {
    const std::uint64_t last = at(count_ - 1).timestamp_us;
    if (timestamp_us <= last) {
      throw NonMonotoneTimestamp("timestamp " + std::to_string(timestamp_us) +
                                 " not after " + std::to_string(last));
    }
  }
  if (count_ == ring_.size()) {
    ring_[head_] = {timestamp_us, pose};
    head_ = (head_ + 1) % ring_.size();
  } else {
    ring_[(head_ + count_) % ring_.size()] = {timestamp_us, pose};
    ++count_;
  }
}

wire::PosePayload PoseDelayBuffer::query(std::uint64_t now_us) const {
  std::lock_guard lock(mutex_);
  if (count_ == 0 || now_us < delay_us_) {
    throw InsufficientHistory("no sample at or before the query instant");
  }
  const std::uint64_t t = now_us - delay_us_;
  if (t < at(0).timestamp_us || t > at(count_ - 1).timestamp_us) {
    throw InsufficientHistory(
        "query at " + std::to_string(t) + " outside stored span [" +
        std::to_string(at(0).timestamp_us) + ", " +
        std::to_string(at(count_ - 1).timestamp_us) + "]");
  }

  // First logical index with timestamp >= t.
  std::size_t lo = 0;
  std::size_t hi = count_ - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (at(mid).timestamp_us < t) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  const Entry& after = at(lo);
  if (after.timestamp_us == t || lo == 0) {
    return after.pose;
  }
  const Entry& before = at(lo - 1);
  const double span =
      static_cast<double>(after.timestamp_us - before.timestamp_us);
  const double u = static_cast<double>(t - before.timestamp_us) / span;

  wire::PosePayload out;
  out.position =
      before.pose.position + u * (after.pose.position - before.pose.position);
  out.orientation = before.pose.orientation.slerp(u, after.pose.orientation);
  return out;
}

std::size_t PoseDelayBuffer::size() const {
  std::lock_guard lock(mutex_);
  return count_;
}

}  // namespace coral::buffers
