#ifndef CORAL_IMAGE_HPP_
#define CORAL_IMAGE_HPP_

#include <cstdint>
#include <vector>

namespace coral {

// Row-major interleaved 8-bit image. pixels.size() == width*height*channels.
struct Image {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t channels = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(std::uint16_t w, std::uint16_t h, std::uint8_t c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c),
        pixels(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t size_bytes() const { return pixels.size(); }

  std::uint8_t& at(std::uint16_t x, std::uint16_t y, std::uint8_t c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(std::uint16_t x, std::uint16_t y, std::uint8_t c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool operator==(const Image& other) const = default;
};

// Box-filter downscale (arbitrary ratios, per-channel area average) used to
// shrink captured frames to the segmentation working size.
Image resize_area(const Image& src, std::uint16_t dst_w, std::uint16_t dst_h);

// Nearest-neighbor resize used to blow segmentation masks back up to the
// capture resolution. Keeps mask values inside the original value set.
Image resize_nearest(const Image& src, std::uint16_t dst_w, std::uint16_t dst_h);

}  // namespace coral

#endif  // CORAL_IMAGE_HPP_
