#ifndef CORAL_SEG_SEGMENTER_HPP_
#define CORAL_SEG_SEGMENTER_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "coral/image.hpp"
#include "coral/seg/chroma.hpp"

namespace coral::seg {

// One frame in, one mask out: H×W×3 → H×W×1 with values in {0, 255},
// deterministic for a fixed configuration.
class Segmenter {
 public:
  virtual ~Segmenter() = default;

  virtual Image segment(const Image& frame) = 0;

  // Wall-clock budget one frame is expected to occupy end to end, in
  // milliseconds; the serving loop pads shorter handling up to this so the
  // reported processing time reproduces a slower model. 0 = no pacing.
  virtual double frame_budget_ms() const { return 0.0; }

  virtual const char* name() const = 0;
};

// Keeps every pixel: the mask is all 255, so compositing passes the whole
// frame through. The do-nothing baseline.
class IdentitySegmenter final : public Segmenter {
 public:
  Image segment(const Image& frame) override;
  const char* name() const override { return "identity"; }
};

class ChromaSegmenter final : public Segmenter {
 public:
  explicit ChromaSegmenter(ChromaConfig config = {});
  Image segment(const Image& frame) override;
  const char* name() const override { return "chroma"; }

 private:
  ChromaConfig config_;
};

// Chroma keying paced to a fixed per-frame wall-clock cost: a stand-in for
// a model whose inference occupies delay_ms. segment() returns the chroma
// mask immediately; segment_paced() additionally holds the call open until
// delay_ms has elapsed since it began.
class EmulatedSegmenter final : public Segmenter {
 public:
  explicit EmulatedSegmenter(double delay_ms, ChromaConfig config = {});

  Image segment(const Image& frame) override;
  Image segment_paced(const Image& frame);

  double frame_budget_ms() const override { return delay_ms_; }
  const char* name() const override { return "emulated"; }

 private:
  double delay_ms_;
  ChromaConfig config_;
};

enum class SegmenterKind {
  kChroma,
  kIdentity,
  kEmulated,
};

struct BadSegmenterKind final : Error {
  using Error::Error;
};

const char* to_string(SegmenterKind kind);
SegmenterKind segmenter_kind_from(const std::string& text);

std::unique_ptr<Segmenter> make_segmenter(SegmenterKind kind, double delay_ms,
                                          const ChromaConfig& chroma = {});

// The serving resolution contract: area-downscale the frame to the working
// size, segment there, blow the mask back up to the frame's own size by
// nearest neighbor.
Image segment_scaled(Segmenter& segmenter, const Image& frame,
                     std::uint16_t work_width, std::uint16_t work_height);

}  // namespace coral::seg

#endif  // CORAL_SEG_SEGMENTER_HPP_
