#include "coral/wire/packet.hpp"

#include "coral/byte_io.hpp"

namespace coral::wire {

namespace {

bool known_payload_type(std::uint8_t raw) {
  return raw >= static_cast<std::uint8_t>(PayloadType::kPicture) &&
         raw <= static_cast<std::uint8_t>(PayloadType::kControl);
}

bool known_encoding(std::uint8_t raw) {
  return raw <= static_cast<std::uint8_t>(Encoding::kJpeg);
}

// Serialized pose payload size: 3 position doubles + 4 quaternion doubles.
constexpr std::size_t kPoseBytes = 7 * sizeof(double);

}  // namespace

const char* to_string(DecodeError error) {
  switch (error) {
    case DecodeError::kNone: return "none";
    case DecodeError::kBadMagic: return "bad magic";
    case DecodeError::kTruncated: return "truncated";
    case DecodeError::kUnknownPayloadType: return "unknown payload type";
    case DecodeError::kHeaderPayloadMismatch: return "header/payload mismatch";
    case DecodeError::kPayloadTooLarge: return "payload too large";
  }
  return "unknown";
}

std::optional<DecodeError> validate_packet(const FramePacket& packet) {
  if (packet.payload.size() > kMaxPayloadLength) {
    return DecodeError::kPayloadTooLarge;
  }
  const PacketHeader& h = packet.header;
  switch (h.payload_type) {
    case PayloadType::kPicture:
    case PayloadType::kU8Picture: {
      if (h.payload_type == PayloadType::kU8Picture && h.channels != 1) {
        return DecodeError::kHeaderPayloadMismatch;
      }
      if (h.encoding == Encoding::kRaw) {
        const std::size_t expected =
            static_cast<std::size_t>(h.width) * h.height * h.channels;
        if (packet.payload.size() != expected) {
          return DecodeError::kHeaderPayloadMismatch;
        }
        if (h.payload_type == PayloadType::kU8Picture) {
          for (std::uint8_t v : packet.payload) {
            if (v != 0 && v != 255) return DecodeError::kHeaderPayloadMismatch;
          }
        }
      }
      break;
    }
    case PayloadType::kPose:
      // Geometry fields are unused for poses; the payload is the fixed-size
      // position + quaternion block.
      if (packet.payload.size() != kPoseBytes) {
        return DecodeError::kHeaderPayloadMismatch;
      }
      break;
    case PayloadType::kControl:
      break;  // free-form body
  }
  return std::nullopt;
}

std::vector<std::uint8_t> encode_packet(const FramePacket& packet) {
  if (packet.topic.empty() || packet.topic.size() > kMaxTopicLength) {
    throw TopicTooLong("topic must be 1..255 bytes, got " +
                       std::to_string(packet.topic.size()));
  }
  if (auto err = validate_packet(packet)) {
    if (*err == DecodeError::kPayloadTooLarge) {
      throw PayloadTooLarge("payload of " + std::to_string(packet.payload.size()) +
                            " bytes exceeds the 64 MiB cap");
    }
    throw HeaderPayloadMismatch(std::string("cannot encode packet: ") +
                                to_string(*err));
  }

  std::vector<std::uint8_t> out;
  out.reserve(kFixedHeaderBytes + packet.topic.size() + packet.payload.size());
  put_le<std::uint32_t>(out, kMagic);
  out.push_back(static_cast<std::uint8_t>(packet.topic.size()));
  out.insert(out.end(), packet.topic.begin(), packet.topic.end());
  out.push_back(static_cast<std::uint8_t>(packet.header.payload_type));
  put_le<std::uint64_t>(out, packet.header.sequence);
  put_le<std::uint64_t>(out, packet.header.timestamp_us);
  put_le<std::uint16_t>(out, packet.header.width);
  put_le<std::uint16_t>(out, packet.header.height);
  out.push_back(packet.header.channels);
  out.push_back(static_cast<std::uint8_t>(packet.header.encoding));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(packet.payload.size()));
  out.insert(out.end(), packet.payload.begin(), packet.payload.end());
  return out;
}

DecodeResult decode_packet(std::span<const std::uint8_t> bytes) {
  const auto fail = [](DecodeError error) {
    DecodeResult r;
    r.error = error;
    return r;
  };

  if (bytes.size() < 4) return fail(DecodeError::kTruncated);
  if (get_le<std::uint32_t>(bytes, 0) != kMagic) {
    return fail(DecodeError::kBadMagic);
  }
  if (bytes.size() < 5) return fail(DecodeError::kTruncated);
  const std::size_t topic_len = bytes[4];
  // magic + topic_len byte + topic + fixed header tail
  const std::size_t header_end = 5 + topic_len + 1 + 8 + 8 + 2 + 2 + 1 + 1 + 4;
  if (bytes.size() < header_end) return fail(DecodeError::kTruncated);
  if (topic_len == 0) return fail(DecodeError::kHeaderPayloadMismatch);

  std::size_t off = 5;
  FramePacket packet;
  packet.topic.assign(reinterpret_cast<const char*>(bytes.data() + off), topic_len);
  off += topic_len;

  const std::uint8_t type_raw = bytes[off++];
  if (!known_payload_type(type_raw)) {
    return fail(DecodeError::kUnknownPayloadType);
  }
  packet.header.payload_type = static_cast<PayloadType>(type_raw);
  packet.header.sequence = get_le<std::uint64_t>(bytes, off);
  off += 8;
  packet.header.timestamp_us = get_le<std::uint64_t>(bytes, off);
  off += 8;
  packet.header.width = get_le<std::uint16_t>(bytes, off);
  off += 2;
  packet.header.height = get_le<std::uint16_t>(bytes, off);
  off += 2;
  packet.header.channels = bytes[off++];
  const std::uint8_t enc_raw = bytes[off++];
  if (!known_encoding(enc_raw)) {
    return fail(DecodeError::kUnknownPayloadType);
  }
  packet.header.encoding = static_cast<Encoding>(enc_raw);
  const std::uint32_t payload_len = get_le<std::uint32_t>(bytes, off);
  off += 4;

  if (payload_len > kMaxPayloadLength) return fail(DecodeError::kPayloadTooLarge);
  if (bytes.size() - off < payload_len) return fail(DecodeError::kTruncated);
  packet.payload.assign(bytes.begin() + off, bytes.begin() + off + payload_len);
  off += payload_len;

  if (auto err = validate_packet(packet)) return fail(*err);

  DecodeResult result;
  result.packet = std::move(packet);
  result.consumed = off;
  return result;
}

}  // namespace coral::wire
