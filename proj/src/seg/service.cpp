#include "coral/seg/service.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coral/alga/node.hpp"
#include "coral/clock.hpp"
#include "coral/wire/picture.hpp"

namespace coral::seg {

void validate(const ServerConfig& config) {
  alga::validate(config.node);
  if (config.in_topic.empty() || config.out_topic.empty()) {
    throw alga::BadConfig("service topics must be non-empty");
  }
  if (config.in_topic == config.out_topic) {
    throw alga::BadConfig("in_topic and out_topic must differ, both are \"" +
                          config.in_topic + "\"");
  }
  if (!(config.emulated_delay_ms >= 0.0)) {
    throw alga::BadConfig("delay_ms must be >= 0");
  }
  if (config.work_width == 0 || config.work_height == 0) {
    throw alga::BadConfig("working resolution must be non-zero");
  }
  seg::validate(config.chroma);
}

ServerConfig server_config_from(const std::map<std::string, std::string>& kv) {
  ServerConfig config;
  config.node = alga::node_config_from(kv);

  const auto str = [&](const char* key, std::string& out) {
    if (const auto it = kv.find(key); it != kv.end()) out = it->second;
  };
  const auto real = [&](const char* key, auto& out) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    try {
      out = static_cast<std::remove_reference_t<decltype(out)>>(
          std::stod(it->second));
    } catch (const std::exception&) {
      throw alga::BadConfig(std::string(key) + ": not a number: \"" +
                            it->second + "\"");
    }
  };

  str("in_topic", config.in_topic);
  str("out_topic", config.out_topic);
  if (const auto it = kv.find("segmenter"); it != kv.end()) {
    config.kind = segmenter_kind_from(it->second);
  }
  real("delay_ms", config.emulated_delay_ms);
  real("work_width", config.work_width);
  real("work_height", config.work_height);
  real("hue_min", config.chroma.hue_min);
  real("hue_max", config.chroma.hue_max);
  real("sat_min", config.chroma.sat_min);
  real("val_min", config.chroma.val_min);

  validate(config);
  return config;
}

Service::Service(ServerConfig config) : config_(std::move(config)) {
  validate(config_);
}

Service::~Service() { stop(); }

void Service::start() {
  std::lock_guard lock(mutex_);
  if (started_) return;
  started_ = true;
  worker_ = std::thread([this] { run(); });
}

void Service::stop() {
  {
    std::lock_guard lock(mutex_);
    if (!started_ || stop_) {
      stop_ = true;
      return;
    }
    stop_ = true;
    stop_cv_.notify_all();
  }
  if (worker_.joinable()) worker_.join();
}

bool Service::stopping() const {
  std::lock_guard lock(mutex_);
  return stop_;
}

// Returns false if stop() arrived during the wait.
bool Service::sleep_unless_stopped(std::uint64_t ms) {
  std::unique_lock lock(mutex_);
  return !stop_cv_.wait_for(lock, std::chrono::milliseconds(ms),
                            [&] { return stop_; });
}

ServiceStats Service::stats() const {
  std::lock_guard lock(mutex_);
  ServiceStats s;
  s.connected = connected_;
  s.frames_in = frames_in_;
  s.masks_out = masks_out_;
  s.skipped = skipped_;
  s.reconnects = reconnects_;
  if (!processing_ms_.empty()) {
    s.processing_mean_ms =
        std::accumulate(processing_ms_.begin(), processing_ms_.end(), 0.0) /
        static_cast<double>(processing_ms_.size());
    std::vector<double> sorted = processing_ms_;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(sorted.size())));
    s.processing_p95_ms = sorted[k == 0 ? 0 : k - 1];
  }
  return s;
}

void Service::run() {
  const auto segmenter =
      make_segmenter(config_.kind, config_.emulated_delay_ms, config_.chroma);
  const auto budget_us = static_cast<std::uint64_t>(
      std::llround(segmenter->frame_budget_ms() * 1000.0));
  std::uint64_t backoff_ms = 200;

  while (!stopping()) {
    try {
      alga::Node node(config_.node);
      auto sub = node.subscribe(config_.in_topic);
      auto pub = node.advertise(config_.out_topic);
      {
        std::lock_guard lock(mutex_);
        connected_ = true;
      }
      backoff_ms = 200;

      while (!stopping()) {
        auto got = sub.poll_received(50);
        if (!got) continue;
        auto& packet = got->packet;
        // The budget runs from frame arrival: a real paced server overlaps
        // receiving the next frame with processing the current one, so its
        // throughput follows the input rate, not rate + overhead.
        const std::uint64_t t0 = got->received_us;

        Image frame;
        bool usable =
            packet.header.payload_type == wire::PayloadType::kPicture;
        if (usable) {
          try {
            frame = wire::decode_picture(packet.payload, packet.header);
          } catch (const Error&) {
            usable = false;
          }
        }
        if (usable && frame.channels != 3) usable = false;
        {
          std::lock_guard lock(mutex_);
          if (usable) {
            ++frames_in_;
          } else {
            ++skipped_;
          }
        }
        if (!usable) continue;

        Image mask = segment_scaled(*segmenter, frame, config_.work_width,
                                    config_.work_height);
        if (budget_us > 0) pace_until_us(t0 + budget_us);
        // Processing ends when the mask is ready; transmission of the result
        // is accounted to the network leg, not the server algorithm.
        const double processed_ms = static_cast<double>(now_us() - t0) / 1000.0;

        alga::OutboundMeta meta;
        meta.payload_type = wire::PayloadType::kU8Picture;
        meta.timestamp_us = packet.header.timestamp_us;
        meta.width = mask.width;
        meta.height = mask.height;
        meta.channels = mask.channels;
        meta.encoding = wire::Encoding::kRaw;
        pub.publish_with_sequence(packet.header.sequence, meta,
                                  std::move(mask.pixels));

        std::lock_guard lock(mutex_);
        ++masks_out_;
        processing_ms_.push_back(processed_ms);
      }
    } catch (const Error&) {
      {
        std::lock_guard lock(mutex_);
        connected_ = false;
        if (stop_) break;
        ++reconnects_;
      }
      if (!sleep_unless_stopped(backoff_ms)) break;
      backoff_ms = std::min<std::uint64_t>(backoff_ms * 2, 2000);
    }
  }
  std::lock_guard lock(mutex_);
  connected_ = false;
}

}  // namespace coral::seg
