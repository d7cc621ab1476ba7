#include "coral/alga/node.hpp"

#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <thread>

#include "coral/clock.hpp"
#include "coral/wire/control.hpp"
#include "coral/wire/stream.hpp"

namespace coral::alga {

namespace detail {

struct PublisherState {
  std::string topic;
  std::uint64_t next_sequence = 0;
  std::deque<std::vector<std::uint8_t>> queue;  // encoded, sequence order
};

struct SubState {
  std::string topic;
  std::deque<Received> queue;
};

struct NodeCore {
  explicit NodeCore(NodeConfig cfg) : config(std::move(cfg)) {}

  NodeConfig config;
  net::TcpSocket socket;

  std::mutex mutex;
  std::condition_variable out_cv;    // writer: work arrived / shutting down
  std::condition_variable drain_cv;  // BLOCK publishers: space freed
  std::condition_variable in_cv;     // pollers: packet arrived / died

  bool alive = true;      // close() not yet requested
  bool connected = true;  // socket still believed healthy

  std::deque<std::vector<std::uint8_t>> control_queue;
  std::uint64_t control_sequence = 0;

  std::vector<std::shared_ptr<PublisherState>> publishers;
  std::map<std::string, std::shared_ptr<PublisherState>> pubs_by_topic;
  std::size_t pending_frames = 0;
  std::size_t rr_index = 0;

  std::map<std::string, std::vector<std::shared_ptr<SubState>>> subs;

  std::uint64_t last_send_us = 0;
  std::uint64_t last_recv_us = 0;
  std::uint64_t malformed = 0;

  std::thread reader;
  std::thread writer;
};

}  // namespace detail

namespace {

using detail::NodeCore;
using detail::PublisherState;
using detail::SubState;

void check_topic(const std::string& topic) {
  if (topic.empty() || topic.size() > wire::kMaxTopicLength) {
    throw wire::TopicTooLong("topic must be 1..255 bytes, got " +
                             std::to_string(topic.size()));
  }
}

std::vector<std::uint8_t> make_control(NodeCore& core, const std::string& subject,
                                       wire::ControlVerb verb) {
  wire::FramePacket p;
  p.topic = subject;
  p.header.payload_type = wire::PayloadType::kControl;
  p.header.sequence = core.control_sequence++;
  p.header.timestamp_us = now_us();
  p.payload = wire::encode_control_payload(verb);
  return wire::encode_packet(p);
}

// Requires core.mutex. Flips the node to dead and wakes everyone so blocked
// publishes/polls can fail over.
void mark_dead(NodeCore& core) {
  if (!core.connected) return;
  core.connected = false;
  core.socket.shutdown();
  core.out_cv.notify_all();
  core.drain_cv.notify_all();
  core.in_cv.notify_all();
}

// Requires core.mutex; called by the reader for every decoded packet.
void dispatch(NodeCore& core, wire::FramePacket packet) {
  if (packet.header.payload_type == wire::PayloadType::kControl) {
    return;  // liveness was already refreshed; nothing else to do node-side
  }
  const auto it = core.subs.find(packet.topic);
  if (it == core.subs.end() || it->second.empty()) return;
  const std::uint64_t received = now_us();
  auto& list = it->second;
  for (std::size_t i = 0; i + 1 < list.size(); ++i) {
    list[i]->queue.push_back({packet, received});
  }
  list.back()->queue.push_back({std::move(packet), received});
  core.in_cv.notify_all();
}

void writer_loop(const std::shared_ptr<NodeCore>& core) {
  std::unique_lock lock(core->mutex);
  const auto have_work = [&] {
    return !core->alive || !core->connected || !core->control_queue.empty() ||
           core->pending_frames > 0;
  };

  while (core->alive && core->connected) {
    if (!have_work()) {
      core->out_cv.wait_until(
          lock, time_point_from_us(core->last_send_us + wire::kHeartbeatPeriodUs),
          have_work);
    }
    if (!core->alive || !core->connected) break;

    std::vector<std::uint8_t> bytes;
    if (!core->control_queue.empty()) {
      bytes = std::move(core->control_queue.front());
      core->control_queue.pop_front();
    } else if (core->pending_frames > 0) {
      const std::size_t n = core->publishers.size();
      for (std::size_t k = 0; k < n; ++k) {
        auto& pub = core->publishers[(core->rr_index + k) % n];
        if (!pub->queue.empty()) {
          bytes = std::move(pub->queue.front());
          pub->queue.pop_front();
          --core->pending_frames;
          core->rr_index = (core->rr_index + k + 1) % n;
          core->drain_cv.notify_all();
          break;
        }
      }
    } else if (now_us() >= core->last_send_us + wire::kHeartbeatPeriodUs) {
      bytes = make_control(*core, core->config.node_name,
                           wire::ControlVerb::kHeartbeat);
    }
    if (bytes.empty()) continue;

    lock.unlock();
    bool sent = false;
    try {
      core->socket.send_all(bytes);
      sent = true;
    } catch (const Error&) {
    }
    lock.lock();
    if (!sent) {
      mark_dead(*core);
      break;
    }
    core->last_send_us = now_us();
  }
}

void reader_loop(const std::shared_ptr<NodeCore>& core) {
  wire::StreamDecoder decoder;
  std::vector<std::uint8_t> buf(64 * 1024);

  while (true) {
    {
      std::lock_guard lock(core->mutex);
      if (!core->alive || !core->connected) return;
    }
    if (!core->socket.wait_readable(250)) {
      std::lock_guard lock(core->mutex);
      if (now_us() - core->last_recv_us > wire::kLivenessTimeoutUs) {
        mark_dead(*core);
        return;
      }
      continue;
    }

    std::size_t n = 0;
    try {
      n = core->socket.recv_some(buf.data(), buf.size());
    } catch (const Error&) {
      n = 0;
    }
    std::lock_guard lock(core->mutex);
    if (n == 0) {
      mark_dead(*core);
      return;
    }
    core->last_recv_us = now_us();
    decoder.feed(std::span(buf.data(), n));
    for (auto next = decoder.next(); next.more(); next = decoder.next()) {
      if (next.skipped) {
        ++core->malformed;
        continue;
      }
      dispatch(*core, std::move(*next.packet));
    }
  }
}

PublishResult publish_impl(NodeCore& core, PublisherState& state,
                           const std::optional<std::uint64_t>& sequence,
                           const OutboundMeta& meta,
                           std::vector<std::uint8_t> payload) {
  std::unique_lock lock(core.mutex);
  if (!core.connected) {
    throw Disconnected("publish on \"" + state.topic + "\": node disconnected");
  }

  wire::FramePacket packet;
  packet.topic = state.topic;
  packet.header.payload_type = meta.payload_type;
  packet.header.sequence = sequence.value_or(state.next_sequence);
  packet.header.timestamp_us =
      meta.timestamp_us != 0 ? meta.timestamp_us : now_us();
  packet.header.width = meta.width;
  packet.header.height = meta.height;
  packet.header.channels = meta.channels;
  packet.header.encoding = meta.encoding;
  packet.payload = std::move(payload);

  std::vector<std::uint8_t> bytes = wire::encode_packet(packet);
  if (!sequence) ++state.next_sequence;

  PublishResult result = PublishResult::kEnqueued;
  if (state.queue.size() >= core.config.outbound_queue_depth) {
    if (core.config.drop_policy == DropPolicy::kDropOldest) {
      state.queue.pop_front();  // front holds the lowest pending sequence
      --core.pending_frames;
      result = PublishResult::kReplacedOldest;
    } else {
      core.drain_cv.wait(lock, [&] {
        return state.queue.size() < core.config.outbound_queue_depth ||
               !core.connected;
      });
      if (!core.connected) {
        throw Disconnected("node disconnected while publish was blocked");
      }
    }
  }
  state.queue.push_back(std::move(bytes));
  ++core.pending_frames;
  core.out_cv.notify_all();
  return result;
}

}  // namespace

Publisher::Publisher(std::shared_ptr<detail::NodeCore> core,
                     std::shared_ptr<detail::PublisherState> state)
    : core_(std::move(core)), state_(std::move(state)) {}

PublishResult Publisher::publish(const OutboundMeta& meta,
                                 std::vector<std::uint8_t> payload) {
  return publish_impl(*core_, *state_, std::nullopt, meta, std::move(payload));
}

PublishResult Publisher::publish_with_sequence(
    std::uint64_t sequence, const OutboundMeta& meta,
    std::vector<std::uint8_t> payload) {
  return publish_impl(*core_, *state_, sequence, meta, std::move(payload));
}

PublishResult Publisher::publish_picture(const Image& image,
                                         wire::PayloadType type,
                                         wire::Encoding encoding,
                                         std::uint64_t timestamp_us,
                                         int quality) {
  OutboundMeta meta;
  meta.payload_type = type;
  meta.timestamp_us = timestamp_us;
  meta.width = image.width;
  meta.height = image.height;
  meta.channels = image.channels;
  meta.encoding = encoding;
  return publish(meta, wire::encode_picture(image, encoding, quality));
}

PublishResult Publisher::publish_pose(const wire::PosePayload& pose,
                                      std::uint64_t timestamp_us) {
  OutboundMeta meta;
  meta.payload_type = wire::PayloadType::kPose;
  meta.timestamp_us = timestamp_us;
  return publish(meta, wire::encode_pose_payload(pose));
}

const std::string& Publisher::topic() const { return state_->topic; }

std::uint64_t Publisher::next_sequence() const {
  std::lock_guard lock(core_->mutex);
  return state_->next_sequence;
}

Subscription::Subscription(std::shared_ptr<detail::NodeCore> core,
                           std::shared_ptr<detail::SubState> state)
    : core_(std::move(core)), state_(std::move(state)) {}

Subscription::Subscription(Subscription&&) noexcept = default;
Subscription& Subscription::operator=(Subscription&&) noexcept = default;

Subscription::~Subscription() {
  if (!core_ || !state_) return;
  std::lock_guard lock(core_->mutex);
  const auto it = core_->subs.find(state_->topic);
  if (it == core_->subs.end()) return;
  auto& list = it->second;
  std::erase(list, state_);
  if (list.empty()) {
    core_->subs.erase(it);
    if (core_->connected) {
      core_->control_queue.push_back(
          make_control(*core_, state_->topic, wire::ControlVerb::kUnsubscribe));
      core_->out_cv.notify_all();
    }
  }
}

std::optional<wire::FramePacket> Subscription::poll(int timeout_ms) {
  auto got = poll_received(timeout_ms);
  if (!got) return std::nullopt;
  return std::move(got->packet);
}

std::optional<Received> Subscription::poll_received(int timeout_ms) {
  std::unique_lock lock(core_->mutex);
  const auto ready = [&] { return !state_->queue.empty() || !core_->connected; };
  if (!ready() && timeout_ms > 0) {
    core_->in_cv.wait_for(lock, std::chrono::milliseconds(timeout_ms), ready);
  }
  if (!state_->queue.empty()) {
    Received got = std::move(state_->queue.front());
    state_->queue.pop_front();
    return got;
  }
  if (!core_->connected) {
    throw Disconnected("subscription \"" + state_->topic +
                       "\" drained and the node is disconnected");
  }
  return std::nullopt;
}

const std::string& Subscription::topic() const { return state_->topic; }

std::size_t Subscription::queued() const {
  std::lock_guard lock(core_->mutex);
  return state_->queue.size();
}

Node::Node(NodeConfig config) {
  validate(config);
  core_ = std::make_shared<NodeCore>(std::move(config));
  core_->socket = net::TcpSocket::connect(
      core_->config.router_address,
      std::chrono::milliseconds(core_->config.connect_timeout_ms));
  core_->last_send_us = now_us();
  core_->last_recv_us = now_us();
  core_->control_queue.push_back(
      make_control(*core_, core_->config.node_name, wire::ControlVerb::kHello));

  auto core = core_;
  core_->reader = std::thread([core] { reader_loop(core); });
  core_->writer = std::thread([core] { writer_loop(core); });
}

Node::~Node() { close(); }

void Node::close() {
  if (!core_) return;
  {
    std::lock_guard lock(core_->mutex);
    if (!core_->alive) return;
    core_->alive = false;
    mark_dead(*core_);
    core_->in_cv.notify_all();  // mark_dead no-ops if already disconnected
    core_->out_cv.notify_all();
    core_->drain_cv.notify_all();
  }
  if (core_->reader.joinable()) core_->reader.join();
  if (core_->writer.joinable()) core_->writer.join();
  core_->socket.close();
}

Publisher Node::advertise(const std::string& topic) {
  check_topic(topic);
  std::lock_guard lock(core_->mutex);
  if (!core_->connected) {
    throw Disconnected("advertise \"" + topic + "\": node disconnected");
  }
  if (const auto it = core_->pubs_by_topic.find(topic);
      it != core_->pubs_by_topic.end()) {
    return Publisher(core_, it->second);
  }
  auto state = std::make_shared<PublisherState>();
  state->topic = topic;
  core_->publishers.push_back(state);
  core_->pubs_by_topic.emplace(topic, state);
  core_->control_queue.push_back(
      make_control(*core_, topic, wire::ControlVerb::kAdvertise));
  core_->out_cv.notify_all();
  return Publisher(core_, std::move(state));
}

Subscription Node::subscribe(const std::string& topic) {
  check_topic(topic);
  std::lock_guard lock(core_->mutex);
  if (!core_->connected) {
    throw Disconnected("subscribe \"" + topic + "\": node disconnected");
  }
  auto state = std::make_shared<SubState>();
  state->topic = topic;
  core_->subs[topic].push_back(state);
  core_->control_queue.push_back(
      make_control(*core_, topic, wire::ControlVerb::kSubscribe));
  core_->out_cv.notify_all();
  return Subscription(core_, std::move(state));
}

bool Node::connected() const {
  std::lock_guard lock(core_->mutex);
  return core_->connected;
}

const NodeConfig& Node::config() const { return core_->config; }

std::uint64_t Node::malformed_packets() const {
  std::lock_guard lock(core_->mutex);
  return core_->malformed;
}

}  // namespace coral::alga
