#ifndef CORAL_BENCH_SCENE_HPP_
#define CORAL_BENCH_SCENE_HPP_

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "coral/errors.hpp"
#include "coral/image.hpp"
#include "coral/wire/pose.hpp"

namespace coral::bench {

struct BadScene final : Error {
  using Error::Error;
};

// A stand-in for the stereo camera: one disc orbiting the eye's center at
// constant speed over a flat background. The disc color sits inside the
// default chroma range and the background outside it, so the ground-truth
// mask and the chroma-keyed mask coincide.
struct SceneConfig {
  std::uint16_t width = 1280;   // full frame; stereo → two side-by-side eyes
  std::uint16_t height = 480;
  double fps = 60.0;
  bool stereo = true;           // draw the same eye image twice

  std::array<std::uint8_t, 3> blob_color = {204, 120, 64};   // hue ≈ 24°
  std::array<std::uint8_t, 3> background = {64, 80, 120};    // hue ≈ 223°

  // ≤ 0 picks a size that keeps the disc inside the eye at any resolution:
  // orbit 5/16 and disc 1/12 of the eye's short side.
  double orbit_radius_px = -1.0;  // 150 at 1280×480 stereo
  double blob_radius_px = -1.0;   // 40 at 1280×480 stereo
  double blob_speed_px_s = 120.0;
  double phase_rad = 0.0;         // disc position at t = 0
};

// One generated frame with everything the rest of the pipeline could want
// to know about it.
struct SceneFrame {
  Image color;
  Image truth_mask;
  wire::PosePayload pose;       // trajectory: position (px) + heading about Z
  Eigen::Vector2d center;       // eye-space disc center at this t
};

class Scene {
 public:
  // Resolves auto-sized radii, then rejects any geometry that could ever
  // push the disc outside the eye.
  explicit Scene(SceneConfig config);

  SceneFrame generate(std::uint64_t t_us) const;

  // Eye-space disc center; the full trajectory in closed form.
  Eigen::Vector2d center_at(std::uint64_t t_us) const;

  double frame_period_us() const { return 1e6 / config_.fps; }
  const SceneConfig& config() const { return config_; }  // resolved radii

 private:
  SceneConfig config_;
  std::uint16_t eye_width_ = 0;
  Eigen::Vector2d orbit_center_;
  double angular_speed_rad_s_ = 0.0;
};

}  // namespace coral::bench

#endif  // CORAL_BENCH_SCENE_HPP_
