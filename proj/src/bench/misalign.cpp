#include "coral/bench/misalign.hpp"

#include <string>

namespace coral::bench {

Eigen::Vector2d color_centroid(const Image& frame,
                               const std::array<std::uint8_t, 3>& color) {
  if (frame.channels != 3) {
    throw DimensionMismatch("blob centroid wants a 3-channel frame, got " +
                            std::to_string(int(frame.channels)));
  }
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  const std::uint8_t* p = frame.pixels.data();
  for (std::uint16_t y = 0; y < frame.height; ++y) {
    for (std::uint16_t x = 0; x < frame.width; ++x, p += 3) {
      if (p[0] == color[0] && p[1] == color[1] && p[2] == color[2]) {
        sx += x + 0.5;
        sy += y + 0.5;
        ++n;
      }
    }
  }
  if (n == 0) throw EmptyBlob("no pixel matches the blob color");
  return {sx / double(n), sy / double(n)};
}

Eigen::Vector2d mask_centroid(const Image& mask) {
  if (mask.channels != 1) {
    throw DimensionMismatch("mask centroid wants a 1-channel image, got " +
                            std::to_string(int(mask.channels)));
  }
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  const std::uint8_t* p = mask.pixels.data();
  for (std::uint16_t y = 0; y < mask.height; ++y) {
    for (std::uint16_t x = 0; x < mask.width; ++x, ++p) {
      if (*p != 0) {
        sx += x + 0.5;
        sy += y + 0.5;
        ++n;
      }
    }
  }
  if (n == 0) throw EmptyMask("mask has no foreground");
  return {sx / double(n), sy / double(n)};
}

double misalignment_px(const Image& frame, const Image& mask,
                       const std::array<std::uint8_t, 3>& blob_color) {
  if (frame.width != mask.width || frame.height != mask.height) {
    throw DimensionMismatch(
        "frame " + std::to_string(frame.width) + "x" +
        std::to_string(frame.height) + " vs mask " +
        std::to_string(mask.width) + "x" + std::to_string(mask.height));
  }
  return (color_centroid(frame, blob_color) - mask_centroid(mask)).norm();
}

}  // namespace coral::bench
