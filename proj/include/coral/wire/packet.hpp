#ifndef CORAL_WIRE_PACKET_HPP_
#define CORAL_WIRE_PACKET_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coral/errors.hpp"

namespace coral::wire {

// On-wire frame layout (all integers little-endian), see docs/PROTOCOL.md:
//
//   magic        u32   0x414C4741
//   topic_len    u8
//   topic        bytes (topic_len, UTF-8)
//   payload_type u8
//   sequence     u64
//   timestamp_us u64
//   width        u16
//   height       u16
//   channels     u8
//   encoding     u8
//   payload_len  u32
//   payload      bytes (payload_len)

inline constexpr std::uint32_t kMagic = 0x414C4741u;
inline constexpr std::size_t kMaxTopicLength = 255;
inline constexpr std::uint32_t kMaxPayloadLength = 64u << 20;  // 64 MiB
inline constexpr std::size_t kFixedHeaderBytes = 4 + 1 + 1 + 8 + 8 + 2 + 2 + 1 + 1 + 4;

enum class PayloadType : std::uint8_t {
  kPicture = 1,    // color frame, 1 or 3 channels
  kU8Picture = 2,  // single-channel segmentation mask, values in {0,255}
  kPose = 3,       // 56-byte position + quaternion payload
  kControl = 4,    // pub/sub signalling (advertise, subscribe, ...)
};

enum class Encoding : std::uint8_t {
  kRaw = 0,
  kJpeg = 1,
};

struct PacketHeader {
  PayloadType payload_type = PayloadType::kControl;
  std::uint64_t sequence = 0;
  std::uint64_t timestamp_us = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t channels = 0;
  Encoding encoding = Encoding::kRaw;

  bool operator==(const PacketHeader&) const = default;
};

struct FramePacket {
  std::string topic;
  PacketHeader header;
  std::vector<std::uint8_t> payload;

  bool operator==(const FramePacket&) const = default;
};

struct TopicTooLong final : Error {
  using Error::Error;
};
struct HeaderPayloadMismatch final : Error {
  using Error::Error;
};
struct PayloadTooLarge final : Error {
  using Error::Error;
};

enum class DecodeError {
  kNone,
  kBadMagic,
  kTruncated,
  kUnknownPayloadType,
  kHeaderPayloadMismatch,
  kPayloadTooLarge,
};

const char* to_string(DecodeError error);

struct DecodeResult {
  std::optional<FramePacket> packet;
  DecodeError error = DecodeError::kNone;
  // Bytes consumed from the input on success; 0 on failure. Concatenated
  // packets in one buffer decode by advancing the cursor by this amount.
  std::size_t consumed = 0;

  bool ok() const { return packet.has_value(); }
};

// Serializes one packet. Throws TopicTooLong / HeaderPayloadMismatch /
// PayloadTooLarge when the packet violates the type invariants; the emitted
// bytes always decode back to an equal packet.
std::vector<std::uint8_t> encode_packet(const FramePacket& packet);

// Parses one packet from the front of `bytes`. Never throws and never reads
// past the declared payload length; anything that encode_packet could not
// have produced is rejected with a typed error.
DecodeResult decode_packet(std::span<const std::uint8_t> bytes);

// Shared invariant check used by encode_packet and decode_packet: topic
// bounds, payload cap, and the per-type payload geometry rules.
std::optional<DecodeError> validate_packet(const FramePacket& packet);

}  // namespace coral::wire

#endif  // CORAL_WIRE_PACKET_HPP_
