#ifndef CORAL_SEG_SERVICE_HPP_
#define CORAL_SEG_SERVICE_HPP_

#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "coral/alga/config.hpp"
#include "coral/seg/segmenter.hpp"

namespace coral::seg {

struct ServerConfig {
  alga::NodeConfig node;
  std::string in_topic = "frames";
  std::string out_topic = "masks";
  SegmenterKind kind = SegmenterKind::kEmulated;
  double emulated_delay_ms = 16.7;
  ChromaConfig chroma;
  // Segmentation always runs at this resolution; other frame sizes are
  // area-downscaled in and the mask nearest-upscaled back out.
  std::uint16_t work_width = 640;
  std::uint16_t work_height = 480;
};

// Throws BadConfig (topics equal or empty, negative delay) or
// BadChromaConfig.
void validate(const ServerConfig& config);

// Applies recognised keys from a parsed key-value file on top of defaults:
// node keys (router_address, node_name, queue_depth, drop_policy) plus
// in_topic, out_topic, segmenter, delay_ms, work_width, work_height and the
// chroma bounds hue_min, hue_max, sat_min, val_min. Unknown keys are left
// for other consumers of the same file.
ServerConfig server_config_from(const std::map<std::string, std::string>& kv);

struct ServiceStats {
  bool connected = false;
  std::uint64_t frames_in = 0;   // well-formed 3-channel pictures accepted
  std::uint64_t masks_out = 0;
  std::uint64_t skipped = 0;     // wrong payload type or undecodable
  std::uint64_t reconnects = 0;
  double processing_mean_ms = 0.0;  // arrival → mask enqueued, per frame
  double processing_p95_ms = 0.0;
};

// The mask side of the pipeline: subscribes to in_topic, runs one segmenter
// over each frame, publishes the mask on out_topic with the SAME sequence
// and timestamp as the frame it answers. One frame is in the segment stage
// at a time, but receive and send keep moving underneath it, so a paced
// segmenter's budget bounds throughput, not per-stage latency.
//
// Each frame's handling is padded to the segmenter's frame budget: the
// publish happens no earlier than arrival + frame_budget_ms, which is what
// makes an emulated model's reported processing time land on its budget.
//
// Lost connections are retried forever with exponential backoff (200 ms
// doubling to 2 s) until stop().
class Service {
 public:
  explicit Service(ServerConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void start();
  void stop();  // idempotent

  ServiceStats stats() const;
  const ServerConfig& config() const { return config_; }

 private:
  void run();
  bool stopping() const;
  bool sleep_unless_stopped(std::uint64_t ms);

  ServerConfig config_;

  mutable std::mutex mutex_;
  std::condition_variable stop_cv_;
  bool stop_ = false;
  bool started_ = false;
  bool connected_ = false;
  std::uint64_t frames_in_ = 0;
  std::uint64_t masks_out_ = 0;
  std::uint64_t skipped_ = 0;
  std::uint64_t reconnects_ = 0;
  std::vector<double> processing_ms_;
  std::thread worker_;
};

}  // namespace coral::seg

#endif  // CORAL_SEG_SERVICE_HPP_
