#include "coral/seg/segmenter.hpp"

#include <string>

#include "coral/clock.hpp"
#include "coral/errors.hpp"

namespace coral::seg {

Image IdentitySegmenter::segment(const Image& frame) {
  return Image(frame.width, frame.height, 1, 255);
}

ChromaSegmenter::ChromaSegmenter(ChromaConfig config) : config_(config) {
  validate(config_);
}

Image ChromaSegmenter::segment(const Image& frame) {
  return chroma_segment(frame, config_);
}

EmulatedSegmenter::EmulatedSegmenter(double delay_ms, ChromaConfig config)
    : delay_ms_(delay_ms), config_(config) {
  if (delay_ms < 0.0) {
    throw Error("emulated delay must not be negative");
  }
  validate(config_);
}

Image EmulatedSegmenter::segment(const Image& frame) {
  return chroma_segment(frame, config_);
}

Image EmulatedSegmenter::segment_paced(const Image& frame) {
  const std::uint64_t start = now_us();
  Image mask = chroma_segment(frame, config_);
  pace_until_us(start + static_cast<std::uint64_t>(delay_ms_ * 1000.0));
  return mask;
}

const char* to_string(SegmenterKind kind) {
  switch (kind) {
    case SegmenterKind::kChroma:
      return "chroma";
    case SegmenterKind::kIdentity:
      return "identity";
    case SegmenterKind::kEmulated:
      return "emulated";
  }
  return "?";
}

SegmenterKind segmenter_kind_from(const std::string& text) {
  if (text == "chroma") return SegmenterKind::kChroma;
  if (text == "identity") return SegmenterKind::kIdentity;
  if (text == "emulated") return SegmenterKind::kEmulated;
  throw BadSegmenterKind("unknown segmenter \"" + text +
                         "\" (want chroma|identity|emulated)");
}

std::unique_ptr<Segmenter> make_segmenter(SegmenterKind kind, double delay_ms,
                                          const ChromaConfig& chroma) {
  switch (kind) {
    case SegmenterKind::kChroma:
      return std::make_unique<ChromaSegmenter>(chroma);
    case SegmenterKind::kIdentity:
      return std::make_unique<IdentitySegmenter>();
    case SegmenterKind::kEmulated:
      return std::make_unique<EmulatedSegmenter>(delay_ms, chroma);
  }
  throw Error("unknown segmenter kind");
}

Image segment_scaled(Segmenter& segmenter, const Image& frame,
                     std::uint16_t work_width, std::uint16_t work_height) {
  if (frame.width == work_width && frame.height == work_height) {
    return segmenter.segment(frame);
  }
  const Image small = resize_area(frame, work_width, work_height);
  const Image mask = segmenter.segment(small);
  return resize_nearest(mask, frame.width, frame.height);
}

}  // namespace coral::seg
