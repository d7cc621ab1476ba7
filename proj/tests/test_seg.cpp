#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "coral/clock.hpp"
#include "coral/seg/chroma.hpp"
#include "coral/seg/segmenter.hpp"

using namespace coral;
using namespace coral::seg;

namespace {

// Wholly separate per-pixel predicate: its own HSV conversion and range
// logic. Same arithmetic shapes as the production code so boundary pixels
// round identically, but independently derived structure.
bool oracle_keyed(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8,
                  const ChromaConfig& cfg) {
  const int r = r8;
  const int g = g8;
  const int b = b8;
  const int hi = std::max(r, std::max(g, b));
  const int lo = std::min(r, std::min(g, b));

  const double v = hi / 255.0;
  if (v < cfg.val_min) return false;

  const double s = hi == 0 ? 0.0 : double(hi - lo) / hi;
  if (s < cfg.sat_min) return false;

  double h;
  if (hi == lo) {
    h = 0.0;
  } else if (hi == r) {
    h = 60.0 * (double(g - b) / (hi - lo));
    if (h < 0.0) h += 360.0;
  } else if (hi == g) {
    h = 60.0 * (double(b - r) / (hi - lo)) + 120.0;
  } else {
    h = 60.0 * (double(r - g) / (hi - lo)) + 240.0;
  }

  if (cfg.hue_min <= cfg.hue_max) {
    return h >= cfg.hue_min && h <= cfg.hue_max;
  }
  return h >= cfg.hue_min || h <= cfg.hue_max;
}

Image random_frame(std::uint16_t w, std::uint16_t h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  Image frame(w, h, 3);
  for (auto& px : frame.pixels) px = std::uint8_t(byte(rng));
  return frame;
}

Image solid_frame(std::uint16_t w, std::uint16_t h, std::uint8_t r,
                  std::uint8_t g, std::uint8_t b) {
  Image frame(w, h, 3);
  for (std::uint16_t y = 0; y < h; ++y) {
    for (std::uint16_t x = 0; x < w; ++x) {
      frame.at(x, y, 0) = r;
      frame.at(x, y, 1) = g;
      frame.at(x, y, 2) = b;
    }
  }
  return frame;
}

}  // namespace

TEST_CASE("chroma key matches the brute-force per-pixel oracle") {
  const std::vector<ChromaConfig> configs = {
      ChromaConfig{},                                // defaults
      ChromaConfig{330.0, 30.0, 0.2, 0.2},           // wraparound hue
      ChromaConfig{90.0, 150.0, 0.5, 0.5},           // green, strict
      ChromaConfig{0.0, 359.0, 0.0, 0.0},            // accepts nearly all
  };
  std::uint32_t seed = 100;
  for (const auto& cfg : configs) {
    const Image frame = random_frame(64, 64, seed++);
    const Image mask = chroma_segment(frame, cfg);
    REQUIRE(mask.width == frame.width);
    REQUIRE(mask.height == frame.height);
    REQUIRE(mask.channels == 1);
    for (std::uint16_t y = 0; y < frame.height; ++y) {
      for (std::uint16_t x = 0; x < frame.width; ++x) {
        const bool keyed = oracle_keyed(frame.at(x, y, 0), frame.at(x, y, 1),
                                        frame.at(x, y, 2), cfg);
        CHECK(mask.at(x, y) == (keyed ? 255 : 0));
      }
    }
  }
}

TEST_CASE("chroma key extremes") {
  // A frame of pixels dead inside the default band keys everywhere. The
  // hue of (255, 106, 0) is 60*106/255 = 24.9 degrees, s = 1, v = 1.
  const Image skin = solid_frame(16, 8, 255, 106, 0);
  const Image keyed = chroma_segment(skin, {});
  CHECK(std::count(keyed.pixels.begin(), keyed.pixels.end(), 255) == 16 * 8);

  // Black fails the value floor everywhere.
  const Image black = solid_frame(16, 8, 0, 0, 0);
  const Image none = chroma_segment(black, {});
  CHECK(std::count(none.pixels.begin(), none.pixels.end(), 0) == 16 * 8);

  // Gray has zero saturation.
  const Image gray = solid_frame(4, 4, 200, 200, 200);
  const Image gmask = chroma_segment(gray, {});
  CHECK(std::count(gmask.pixels.begin(), gmask.pixels.end(), 0) == 16);
}

TEST_CASE("wraparound hue interval spans zero") {
  const ChromaConfig wrap{330.0, 30.0, 0.1, 0.1};
  // pure red: hue 0, inside
  CHECK(chroma_segment(solid_frame(1, 1, 255, 0, 0), wrap).at(0, 0) == 255);
  // hue ~331.8: inside
  CHECK(chroma_segment(solid_frame(1, 1, 255, 0, 120), wrap).at(0, 0) == 255);
  // pure green: hue 120, outside
  CHECK(chroma_segment(solid_frame(1, 1, 0, 255, 0), wrap).at(0, 0) == 0);
  // hue ~329.9: just outside the wrapped band
  CHECK(chroma_segment(solid_frame(1, 1, 255, 0, 128), wrap).at(0, 0) == 0);
}

TEST_CASE("chroma key validates inputs") {
  CHECK_THROWS_AS(chroma_segment(Image(4, 4, 1), {}), BadChannelCount);
  CHECK_THROWS_AS(chroma_segment(Image(4, 4, 4), {}), BadChannelCount);

  const Image frame = solid_frame(2, 2, 10, 20, 30);
  CHECK_THROWS_AS(chroma_segment(frame, {-1.0, 50.0, 0.2, 0.2}),
                  BadChromaConfig);
  CHECK_THROWS_AS(chroma_segment(frame, {0.0, 360.0, 0.2, 0.2}),
                  BadChromaConfig);
  CHECK_THROWS_AS(chroma_segment(frame, {0.0, 50.0, 1.5, 0.2}),
                  BadChromaConfig);
  CHECK_THROWS_AS(chroma_segment(frame, {0.0, 50.0, 0.2, -0.1}),
                  BadChromaConfig);
  // wraparound is legal, not an error
  CHECK_NOTHROW(chroma_segment(frame, {350.0, 10.0, 0.2, 0.2}));
}

TEST_CASE("segmentation is deterministic") {
  const Image frame = random_frame(64, 48, 7);
  CHECK(chroma_segment(frame, {}) == chroma_segment(frame, {}));
  ChromaSegmenter seg{{}};
  CHECK(seg.segment(frame) == seg.segment(frame));
}

TEST_CASE("identity segmenter keeps every pixel") {
  IdentitySegmenter seg;
  const Image mask = seg.segment(random_frame(33, 21, 3));
  CHECK(mask.width == 33);
  CHECK(mask.height == 21);
  CHECK(mask.channels == 1);
  CHECK(std::count(mask.pixels.begin(), mask.pixels.end(), 255) == 33 * 21);
}

TEST_CASE("emulated segmenter masks like chroma and declares its budget") {
  const Image frame = random_frame(64, 64, 9);
  EmulatedSegmenter emu(16.7);
  CHECK(emu.segment(frame) == chroma_segment(frame, {}));
  CHECK(emu.frame_budget_ms() == doctest::Approx(16.7));
  CHECK(ChromaSegmenter{{}}.frame_budget_ms() == 0.0);

  // paced at zero delay: identical mask, no artificial stall
  EmulatedSegmenter instant(0.0);
  CHECK(instant.segment_paced(frame) == chroma_segment(frame, {}));

  CHECK_THROWS_AS(EmulatedSegmenter(-1.0), Error);
}

TEST_CASE("paced segmentation occupies its configured wall-clock cost") {
  const Image frame = random_frame(64, 64, 13);
  const double delay_ms = 20.0;
  EmulatedSegmenter emu(delay_ms);

  double total_ms = 0.0;
  const int frames = 25;
  for (int i = 0; i < frames; ++i) {
    const std::uint64_t t0 = now_us();
    const Image mask = emu.segment_paced(frame);
    total_ms += 1e-3 * double(now_us() - t0);
    CHECK(mask.at(0, 0) == chroma_segment(frame, {}).at(0, 0));
  }
  const double mean = total_ms / frames;
  CHECK(mean >= delay_ms - 0.05);
  CHECK(mean <= delay_ms + 1.0);
}

TEST_CASE("mask values are always exactly 0 or 255") {
  for (std::uint32_t seed = 0; seed < 5; ++seed) {
    const Image frame = random_frame(80, 60, 1000 + seed);
    for (auto v : chroma_segment(frame, {}).pixels) {
      CHECK((v == 0 || v == 255));
    }
  }
}

TEST_CASE("segment_scaled works at the serving resolution contract") {
  // 1280x480 side-by-side stereo in, segmentation at 640x480, mask back at
  // capture size.
  const Image frame = random_frame(1280, 480, 77);
  ChromaSegmenter seg{{}};
  const Image mask = segment_scaled(seg, frame, 640, 480);
  CHECK(mask.width == 1280);
  CHECK(mask.height == 480);
  CHECK(mask.channels == 1);

  const Image expected =
      resize_nearest(chroma_segment(resize_area(frame, 640, 480), {}), 1280, 480);
  CHECK(mask == expected);

  for (auto v : mask.pixels) CHECK((v == 0 || v == 255));

  // already at working size: no resampling detour
  const Image small = random_frame(640, 480, 78);
  CHECK(segment_scaled(seg, small, 640, 480) == chroma_segment(small, {}));
}

TEST_CASE("segmenter factory builds the requested kind") {
  const Image frame = random_frame(32, 32, 5);
  auto chroma = make_segmenter(SegmenterKind::kChroma, 0.0);
  auto identity = make_segmenter(SegmenterKind::kIdentity, 0.0);
  auto emulated = make_segmenter(SegmenterKind::kEmulated, 16.7);

  CHECK(std::string(chroma->name()) == "chroma");
  CHECK(std::string(identity->name()) == "identity");
  CHECK(std::string(emulated->name()) == "emulated");
  CHECK(emulated->frame_budget_ms() == doctest::Approx(16.7));
  CHECK(chroma->segment(frame) == chroma_segment(frame, {}));
  CHECK(identity->segment(frame) == Image(32, 32, 1, 255));
}
