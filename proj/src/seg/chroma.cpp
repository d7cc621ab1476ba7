#include "coral/seg/chroma.hpp"

#include <algorithm>
#include <string>

namespace coral::seg {

void validate(const ChromaConfig& config) {
  const auto hue_ok = [](double h) { return h >= 0.0 && h < 360.0; };
  if (!hue_ok(config.hue_min) || !hue_ok(config.hue_max)) {
    throw BadChromaConfig("hue bounds must lie in [0, 360)");
  }
  const auto unit_ok = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit_ok(config.sat_min) || !unit_ok(config.val_min)) {
    throw BadChromaConfig("sat_min and val_min must lie in [0, 1]");
  }
}

Image chroma_segment(const Image& frame, const ChromaConfig& config) {
  if (frame.channels != 3) {
    throw BadChannelCount("chroma key needs a 3-channel frame, got " +
                          std::to_string(int(frame.channels)) + " channels");
  }
  validate(config);

  Image mask(frame.width, frame.height, 1);
  const std::size_t pixel_count =
      static_cast<std::size_t>(frame.width) * frame.height;
  for (std::size_t i = 0; i < pixel_count; ++i) {
    const int r = frame.pixels[3 * i];
    const int g = frame.pixels[3 * i + 1];
    const int b = frame.pixels[3 * i + 2];
    const int maxc = std::max({r, g, b});
    const int minc = std::min({r, g, b});
    const int delta = maxc - minc;

    const double value = maxc / 255.0;
    const double saturation = maxc == 0 ? 0.0 : double(delta) / maxc;
    double hue = 0.0;
    if (delta != 0) {
      if (maxc == r) {
        hue = 60.0 * (double(g - b) / delta);
      } else if (maxc == g) {
        hue = 60.0 * (double(b - r) / delta) + 120.0;
      } else {
        hue = 60.0 * (double(r - g) / delta) + 240.0;
      }
      if (hue < 0.0) hue += 360.0;
    }

    const bool hue_inside =
        config.hue_min <= config.hue_max
            ? hue >= config.hue_min && hue <= config.hue_max
            : hue >= config.hue_min || hue <= config.hue_max;
    const bool keyed = hue_inside && saturation >= config.sat_min &&
                       value >= config.val_min;
    mask.pixels[i] = keyed ? 255 : 0;
  }
  return mask;
}

}  // namespace coral::seg
