#ifndef CORAL_WIRE_PICTURE_HPP_
#define CORAL_WIRE_PICTURE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "coral/errors.hpp"
#include "coral/image.hpp"
#include "coral/wire/packet.hpp"

namespace coral::wire {

struct UnsupportedChannelCount final : Error {
  using Error::Error;
};
struct JpegError final : Error {
  using Error::Error;
};

inline constexpr int kDefaultJpegQuality = 85;

// RAW is the row-major interleaved pixel bytes, bit-exact. JPEG is baseline
// sequential at the given quality; only 1- and 3-channel images are
// supported either way.
std::vector<std::uint8_t> encode_picture(const Image& image, Encoding encoding,
                                         int quality = kDefaultJpegQuality);

// Inverse of encode_picture. The header supplies geometry for RAW payloads
// and is cross-checked against the JPEG stream for JPEG ones. Throws
// HeaderPayloadMismatch / JpegError / UnsupportedChannelCount.
Image decode_picture(std::span<const std::uint8_t> payload,
                     const PacketHeader& header);

}  // namespace coral::wire

#endif  // CORAL_WIRE_PICTURE_HPP_
