#ifndef CORAL_SEG_CHROMA_HPP_
#define CORAL_SEG_CHROMA_HPP_

#include "coral/errors.hpp"
#include "coral/image.hpp"

namespace coral::seg {

struct BadChannelCount final : Error {
  using Error::Error;
};
struct BadChromaConfig final : Error {
  using Error::Error;
};

// HSV acceptance box for the keyed object. Hue bounds are degrees in
// [0, 360) and the interval may wrap (hue_min > hue_max means "through 0").
// Defaults cover the skin-tone band used for hand segmentation.
struct ChromaConfig {
  double hue_min = 0.0;
  double hue_max = 50.0;
  double sat_min = 0.23;
  double val_min = 0.35;
};

void validate(const ChromaConfig& config);

// Binary chroma key: 255 where the pixel's hexcone HSV lies inside the
// configured ranges (bounds inclusive), 0 elsewhere. Input must be
// 3-channel 8-bit; output is 1-channel with the same dimensions.
Image chroma_segment(const Image& frame, const ChromaConfig& config = {});

}  // namespace coral::seg

#endif  // CORAL_SEG_CHROMA_HPP_
