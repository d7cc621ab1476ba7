#ifndef CORAL_ALGA_NODE_HPP_
#define CORAL_ALGA_NODE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coral/alga/config.hpp"
#include "coral/image.hpp"
#include "coral/net/tcp.hpp"
#include "coral/wire/packet.hpp"
#include "coral/wire/picture.hpp"
#include "coral/wire/pose.hpp"

namespace coral::alga {

using net::ConnectionRefused;
using net::Disconnected;
using net::Timeout;

namespace detail {
struct NodeCore;
struct PublisherState;
struct SubState;
}  // namespace detail

enum class PublishResult {
  kEnqueued,
  kReplacedOldest,  // DROP_OLDEST evicted the lowest pending sequence
};

// Header fields the publisher does not stamp itself. timestamp_us = 0 means
// "stamp with the current time"; pass the capture time to keep end-to-end
// latency measurable.
struct OutboundMeta {
  wire::PayloadType payload_type = wire::PayloadType::kPicture;
  std::uint64_t timestamp_us = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t channels = 0;
  wire::Encoding encoding = wire::Encoding::kRaw;
};

// Outbound handle for one topic. publish() never waits for network
// progress: it stamps the next sequence number, frames the packet, and
// leaves it for the node's writer. A full queue either evicts its oldest
// packet (DROP_OLDEST) or blocks until the writer drains (BLOCK).
// Thread-safe; copying shares the same topic identity and sequence counter.
class Publisher {
 public:
  PublishResult publish(const OutboundMeta& meta,
                        std::vector<std::uint8_t> payload);

  // Same, but carries a caller-chosen sequence instead of stamping one:
  // for services that echo an upstream stream's numbering (mask = frame).
  PublishResult publish_with_sequence(std::uint64_t sequence,
                                      const OutboundMeta& meta,
                                      std::vector<std::uint8_t> payload);

  PublishResult publish_picture(const Image& image, wire::PayloadType type,
                                wire::Encoding encoding,
                                std::uint64_t timestamp_us = 0,
                                int quality = wire::kDefaultJpegQuality);
  PublishResult publish_pose(const wire::PosePayload& pose,
                             std::uint64_t timestamp_us = 0);

  const std::string& topic() const;
  std::uint64_t next_sequence() const;

 private:
  friend class Node;
  Publisher(std::shared_ptr<detail::NodeCore> core,
            std::shared_ptr<detail::PublisherState> state);
  std::shared_ptr<detail::NodeCore> core_;
  std::shared_ptr<detail::PublisherState> state_;
};

// A delivered packet plus the local time the reader enqueued it — the
// moment the payload finished arriving, independent of how long it then
// waited to be polled.
struct Received {
  wire::FramePacket packet;
  std::uint64_t received_us = 0;
};

// Inbound handle for one topic; packets are pulled, never pushed. Each
// subscription gets its own copy of every matching packet. Destroying the
// last subscription for a topic tells the router to stop sending it.
class Subscription {
 public:
  Subscription(Subscription&&) noexcept;
  Subscription& operator=(Subscription&&) noexcept;
  Subscription(const Subscription&) = delete;
  Subscription& operator=(const Subscription&) = delete;
  ~Subscription();

  // Oldest queued packet; nullopt once timeout_ms elapses (0 = probe and
  // return). Throws Disconnected only when the connection is dead AND the
  // queue is fully drained.
  std::optional<wire::FramePacket> poll(int timeout_ms);

  // Same discipline, but keeps the arrival timestamp alongside the packet.
  std::optional<Received> poll_received(int timeout_ms);

  const std::string& topic() const;
  std::size_t queued() const;

 private:
  friend class Node;
  Subscription(std::shared_ptr<detail::NodeCore> core,
               std::shared_ptr<detail::SubState> state);
  std::shared_ptr<detail::NodeCore> core_;
  std::shared_ptr<detail::SubState> state_;
};

// One TCP connection to the router plus the background reader/writer pair
// that owns it. All handles are thread-safe. The constructor dials the
// router, retrying until the configured timeout.
class Node {
 public:
  explicit Node(NodeConfig config = {});
  ~Node();
  Node(Node&&) noexcept = default;
  Node& operator=(Node&&) noexcept = default;
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  // Idempotent per topic: advertising again returns the same publisher
  // identity, sequence counter intact.
  Publisher advertise(const std::string& topic);

  Subscription subscribe(const std::string& topic);

  bool connected() const;
  const NodeConfig& config() const;

  // Packets the reader skipped because they failed to decode.
  std::uint64_t malformed_packets() const;

  // Stops I/O and wakes every blocked publish/poll. Idempotent; the
  // destructor calls it.
  void close();

 private:
  std::shared_ptr<detail::NodeCore> core_;
};

}  // namespace coral::alga

#endif  // CORAL_ALGA_NODE_HPP_
