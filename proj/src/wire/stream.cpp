#include "coral/wire/stream.hpp"

#include <algorithm>
#include <array>

namespace coral::wire {

namespace {

// kMagic on the wire, little-endian.
constexpr std::array<std::uint8_t, 4> kMagicBytes = {0x41, 0x47, 0x4C, 0x41};

}  // namespace

void StreamDecoder::feed(std::span<const std::uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

void StreamDecoder::compact() {
  if (pos_ == 0) return;
  if (pos_ == buffer_.size() || pos_ >= 4096) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + pos_);
    pos_ = 0;
  }
}

StreamDecoder::Next StreamDecoder::next() {
  Next out;
  if (pos_ >= buffer_.size()) {
    compact();
    return out;
  }

  const std::span<const std::uint8_t> view{buffer_.data() + pos_,
                                           buffer_.size() - pos_};
  DecodeResult result = decode_packet(view);
  if (result.ok()) {
    pos_ += result.consumed;
    out.packet = std::move(result.packet);
    compact();
    return out;
  }
  if (result.error == DecodeError::kTruncated) {
    compact();
    return out;
  }

  // Malformed at the current position: skip to the next plausible packet
  // start. The bad stretch is reported once, however long it is.
  const auto begin = buffer_.begin() + pos_ + 1;
  const auto hit =
      std::search(begin, buffer_.end(), kMagicBytes.begin(), kMagicBytes.end());
  if (hit != buffer_.end()) {
    pos_ = static_cast<std::size_t>(hit - buffer_.begin());
  } else {
    // Keep a tail that could be a magic prefix split across chunks.
    pos_ = buffer_.size() > 3 ? buffer_.size() - 3 : buffer_.size();
  }
  out.skipped = result.error;
  compact();
  return out;
}

}  // namespace coral::wire
