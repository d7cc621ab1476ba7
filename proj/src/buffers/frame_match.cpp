#include "coral/buffers/frame_match.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace coral::buffers {

FrameMatchBuffer::FrameMatchBuffer(Config config,
                                   std::function<std::uint64_t()> clock)
    : config_(config), clock_(std::move(clock)) {}

void FrameMatchBuffer::push_color(std::uint64_t sequence, Image frame) {
  std::lock_guard lock(mutex_);
  if (colors_.count(sequence) || ready_.count(sequence)) {
    throw DuplicateSequence("color frame " + std::to_string(sequence) +
                            " pushed twice");
  }
  if (auto it = masks_.find(sequence); it != masks_.end()) {
    ready_.emplace(sequence, MatchedPair{std::move(frame),
                                         std::move(it->second.image), sequence,
                                         sequence});
    masks_.erase(it);
    return;
  }
  if (colors_.size() >= config_.max_pending && !colors_.empty()) {
    colors_.erase(colors_.begin());
    ++evicted_;
  }
  colors_.emplace(sequence, Pending{std::move(frame), clock_()});
}

void FrameMatchBuffer::push_mask(std::uint64_t sequence, Image mask) {
  std::lock_guard lock(mutex_);
  if (masks_.count(sequence) || ready_.count(sequence)) {
    throw DuplicateSequence("mask " + std::to_string(sequence) +
                            " pushed twice");
  }
  if (auto it = colors_.find(sequence); it != colors_.end()) {
    ready_.emplace(sequence,
                   MatchedPair{std::move(it->second.image), std::move(mask),
                               sequence, sequence});
    colors_.erase(it);
    return;
  }
  if (masks_.size() >= config_.max_pending && !masks_.empty()) {
    masks_.erase(masks_.begin());
    ++evicted_;
  }
  masks_.emplace(sequence, Pending{std::move(mask), clock_()});
}

void FrameMatchBuffer::expire_side(std::map<std::uint64_t, Pending>& side,
                                   std::uint64_t now_us,
                                   std::uint64_t& counter) {
  if (config_.expiry_us == 0) return;
  for (auto it = side.begin(); it != side.end();) {
    if (now_us > it->second.arrival_us &&
        now_us - it->second.arrival_us > config_.expiry_us) {
      it = side.erase(it);
      ++counter;
    } else {
      ++it;
    }
  }
}

std::optional<MatchedPair> FrameMatchBuffer::pop(std::uint64_t now_us) {
  std::lock_guard lock(mutex_);
  expire_side(colors_, now_us, expired_colors_);
  expire_side(masks_, now_us, expired_masks_);
  if (ready_.empty()) return std::nullopt;
  auto it = ready_.begin();
  MatchedPair pair = std::move(it->second);
  ready_.erase(it);
  return pair;
}

std::size_t FrameMatchBuffer::pending_colors() const {
  std::lock_guard lock(mutex_);
  return colors_.size();
}

std::size_t FrameMatchBuffer::pending_masks() const {
  std::lock_guard lock(mutex_);
  return masks_.size();
}

std::size_t FrameMatchBuffer::ready() const {
  std::lock_guard lock(mutex_);
  return ready_.size();
}

std::uint64_t FrameMatchBuffer::expired_colors() const {
  std::lock_guard lock(mutex_);
  return expired_colors_;
}

std::uint64_t FrameMatchBuffer::expired_masks() const {
  std::lock_guard lock(mutex_);
  return expired_masks_;
}

std::uint64_t FrameMatchBuffer::evicted() const {
  std::lock_guard lock(mutex_);
  return evicted_;
}

TimeMatchBuffer::TimeMatchBuffer(std::size_t capacity_frames)
    : capacity_(capacity_frames) {
  if (capacity_frames == 0) {
    throw NonPositiveInput("time-match buffer needs capacity of at least 1");
  }
}

void TimeMatchBuffer::push_color(std::uint64_t sequence, Image frame) {
  std::lock_guard lock(mutex_);
  if (fifo_.size() == capacity_) {
    fifo_.pop_front();
    ++dropped_colors_;
  }
  fifo_.push_back({sequence, std::move(frame)});
}

std::optional<MatchedPair> TimeMatchBuffer::push_mask(std::uint64_t sequence,
                                                      Image mask) {
  std::lock_guard lock(mutex_);
  if (fifo_.empty()) {
    ++dropped_masks_;
    return std::nullopt;
  }
  MatchedPair pair{std::move(fifo_.front().frame), std::move(mask),
                   fifo_.front().sequence, sequence};
  fifo_.pop_front();
  return pair;
}

std::size_t TimeMatchBuffer::depth() const {
  std::lock_guard lock(mutex_);
  return fifo_.size();
}

std::uint64_t TimeMatchBuffer::dropped_colors() const {
  std::lock_guard lock(mutex_);
  return dropped_colors_;
}

std::uint64_t TimeMatchBuffer::dropped_masks() const {
  std::lock_guard lock(mutex_);
  return dropped_masks_;
}

int buffer_size_frames(double rtt_ms, double frame_period_ms) {
  if (!(rtt_ms > 0.0) || !(frame_period_ms > 0.0)) {
    throw NonPositiveInput("round trip and frame period must be positive");
  }
  return static_cast<int>(std::ceil(rtt_ms / frame_period_ms));
}

const char* to_string(MatchMode mode) {
  return mode == MatchMode::kSequence ? "sequence" : "time";
}

MatchMode match_mode_from(const std::string& text) {
  if (text == "sequence") return MatchMode::kSequence;
  if (text == "time") return MatchMode::kTime;
  throw BadSettings("match_mode must be \"sequence\" or \"time\", got \"" +
                    text + '"');
}

MatchSettings match_settings_from(
    const std::map<std::string, std::string>& kv) {
  MatchSettings s;
  const auto number = [&](const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw BadSettings(key + ": not a number: \"" + it->second + '"');
    }
  };

  s.t_c_ms = number("t_c_ms", s.t_c_ms);
  if (s.t_c_ms < 0.0) throw BadSettings("t_c_ms must not be negative");
  s.expiry_ms = number("expiry_ms", 3.0 * s.t_c_ms);
  if (s.expiry_ms < 0.0) throw BadSettings("expiry_ms must not be negative");

  const double pending = number("max_pending", static_cast<double>(s.max_pending));
  if (pending < 1.0 || pending != std::floor(pending)) {
    throw BadSettings("max_pending must be a positive integer");
  }
  s.max_pending = static_cast<std::size_t>(pending);

  if (const auto it = kv.find("match_mode"); it != kv.end()) {
    s.match_mode = match_mode_from(it->second);
  }
  return s;
}

}  // namespace coral::buffers
