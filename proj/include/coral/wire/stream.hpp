#ifndef CORAL_WIRE_STREAM_HPP_
#define CORAL_WIRE_STREAM_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coral/wire/packet.hpp"

namespace coral::wire {

// Incremental packet extraction from a TCP byte stream. Bytes arrive in
// arbitrary chunks; next() hands out complete packets and, when the stream
// carries garbage, resynchronizes by scanning forward to the next candidate
// magic sequence (one skip event per contiguous run of garbage).
class StreamDecoder {
 public:
  struct Next {
    std::optional<FramePacket> packet;
    // Set when a malformed stretch was skipped to resync; the caller counts
    // these. packet and skipped are never both set.
    std::optional<DecodeError> skipped;

    bool more() const { return packet.has_value() || skipped.has_value(); }
  };

  void feed(std::span<const std::uint8_t> bytes);

  // Extracts the next event. Neither field set = the buffer holds only an
  // incomplete packet prefix; feed more bytes.
  Next next();

  std::size_t buffered() const { return buffer_.size() - pos_; }

 private:
  void compact();

  std::vector<std::uint8_t> buffer_;
  std::size_t pos_ = 0;
};

}  // namespace coral::wire

#endif  // CORAL_WIRE_STREAM_HPP_
