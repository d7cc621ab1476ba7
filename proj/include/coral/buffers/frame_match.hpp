#ifndef CORAL_BUFFERS_FRAME_MATCH_HPP_
#define CORAL_BUFFERS_FRAME_MATCH_HPP_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "coral/buffers/errors.hpp"
#include "coral/clock.hpp"
#include "coral/image.hpp"

namespace coral::buffers {

// A color frame and the segmentation mask it is rendered with. Under
// sequence matching the two sequence numbers are always equal; under time
// matching they can differ, and the difference is exactly the misalignment
// the matching exists to remove.
struct MatchedPair {
  Image color;
  Image mask;
  std::uint64_t color_sequence = 0;
  std::uint64_t mask_sequence = 0;
};

// Exact mask-to-frame matching by sequence number. Frames and masks arrive
// independently (typically from the capture path and the network path);
// whichever comes first waits in a pending map until its counterpart shows
// up, then the pair moves to a ready queue ordered by sequence.
//
// Unmatched entries are not kept forever: anything older than expiry_us is
// discarded and counted on the next pop, and each pending side holds at most
// max_pending entries (pushing past that evicts the oldest). An unpaired
// color frame is never emitted — rendering it without a mask would show the
// full background, the exact artifact matching exists to prevent.
//
// Color pushes, mask pushes, and pops may come from three different threads.
class FrameMatchBuffer {
 public:
  struct Config {
    std::size_t max_pending = 8;
    std::uint64_t expiry_us = 0;  // 0: entries never expire
  };

  // clock stamps arrival times for expiry; inject a fake for tests.
  explicit FrameMatchBuffer(Config config,
                            std::function<std::uint64_t()> clock = now_us);

  // Throw DuplicateSequence when that sequence was already pushed on the
  // same side and is still pending or ready.
  void push_color(std::uint64_t sequence, Image frame);
  void push_mask(std::uint64_t sequence, Image mask);

  // Lowest-sequence ready pair, or nothing. Also sweeps out pending entries
  // whose age exceeds expiry_us.
  std::optional<MatchedPair> pop(std::uint64_t now_us);

  std::size_t pending_colors() const;
  std::size_t pending_masks() const;
  std::size_t ready() const;
  std::uint64_t expired_colors() const;
  std::uint64_t expired_masks() const;
  std::uint64_t evicted() const;

 private:
  struct Pending {
    Image image;
    std::uint64_t arrival_us = 0;
  };

  void expire_side(std::map<std::uint64_t, Pending>& side, std::uint64_t now_us,
                   std::uint64_t& counter);

  mutable std::mutex mutex_;
  Config config_;
  std::function<std::uint64_t()> clock_;
  std::map<std::uint64_t, Pending> colors_;
  std::map<std::uint64_t, Pending> masks_;
  std::map<std::uint64_t, MatchedPair> ready_;
  std::uint64_t expired_colors_ = 0;
  std::uint64_t expired_masks_ = 0;
  std::uint64_t evicted_ = 0;
};

// The fixed-size FIFO discipline the matching replaces: color frames queue
// up for as long as the round trip is expected to take, and each arriving
// mask is rendered with whatever frame sits at the front. Exact only while
// the real delay stays put at capacity x frame period; sized one frame
// short, every pair is off by one frame.
class TimeMatchBuffer {
 public:
  explicit TimeMatchBuffer(std::size_t capacity_frames);

  // Queues a frame; a full queue drops its oldest entry first.
  void push_color(std::uint64_t sequence, Image frame);

  // Pairs the mask with the front frame; with nothing queued the mask is
  // dropped and counted.
  std::optional<MatchedPair> push_mask(std::uint64_t sequence, Image mask);

  std::size_t depth() const;
  std::uint64_t dropped_colors() const;
  std::uint64_t dropped_masks() const;

 private:
  struct Entry {
    std::uint64_t sequence = 0;
    Image frame;
  };

  mutable std::mutex mutex_;
  std::size_t capacity_;
  std::deque<Entry> fifo_;
  std::uint64_t dropped_colors_ = 0;
  std::uint64_t dropped_masks_ = 0;
};

// ceil(rtt / frame period): how many frames must queue so the front one is
// the frame a just-arrived mask belongs to.
int buffer_size_frames(double rtt_ms, double frame_period_ms);

enum class MatchMode {
  kSequence,
  kTime,
};

const char* to_string(MatchMode mode);
MatchMode match_mode_from(const std::string& text);  // throws BadSettings

// Client-side matching knobs, read from "key = value" configuration:
//
//   t_c_ms       configured round-trip delay (pose buffer depth, time-mode
//                FIFO sizing); default 32.29, the reference experiment's
//                measured mean
//   match_mode   "sequence" (default) or "time"
//   expiry_ms    unmatched-entry lifetime; default 3 x t_c_ms
//   max_pending  per-side pending bound; default 8
//
// Keys that belong to other modules are ignored.
struct MatchSettings {
  double t_c_ms = 32.29;
  MatchMode match_mode = MatchMode::kSequence;
  double expiry_ms = 3.0 * 32.29;
  std::size_t max_pending = 8;
};

MatchSettings match_settings_from(const std::map<std::string, std::string>& kv);

}  // namespace coral::buffers

#endif  // CORAL_BUFFERS_FRAME_MATCH_HPP_
