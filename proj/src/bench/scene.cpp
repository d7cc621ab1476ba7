#include "coral/bench/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coral::bench {

Scene::Scene(SceneConfig config) : config_(config) {
  if (config_.width == 0 || config_.height == 0) {
    throw BadScene("resolution must be non-zero");
  }
  if (config_.stereo && config_.width % 2 != 0) {
    throw BadScene("stereo frames need an even width, got " +
                   std::to_string(config_.width));
  }
  if (!(config_.fps > 0.0)) throw BadScene("fps must be positive");
  if (!(config_.blob_speed_px_s > 0.0)) {
    throw BadScene("blob speed must be positive");
  }

  eye_width_ = config_.stereo ? config_.width / 2 : config_.width;
  const double short_side = std::min<double>(eye_width_, config_.height);
  if (config_.orbit_radius_px <= 0.0) {
    config_.orbit_radius_px = short_side * 5.0 / 16.0;
  }
  if (config_.blob_radius_px <= 0.0) {
    config_.blob_radius_px = short_side / 12.0;
  }
  orbit_center_ = {eye_width_ / 2.0, config_.height / 2.0};
  angular_speed_rad_s_ = config_.blob_speed_px_s / config_.orbit_radius_px;

  const double reach = config_.orbit_radius_px + config_.blob_radius_px;
  if (orbit_center_.x() - reach < 0.0 ||
      orbit_center_.x() + reach > eye_width_ ||
      orbit_center_.y() - reach < 0.0 ||
      orbit_center_.y() + reach > config_.height) {
    throw BadScene("disc leaves the eye: orbit " +
                   std::to_string(config_.orbit_radius_px) + " + radius " +
                   std::to_string(config_.blob_radius_px) +
                   " exceeds the frame");
  }
  if (config_.blob_color == config_.background) {
    throw BadScene("disc and background colors must differ");
  }
}

Eigen::Vector2d Scene::center_at(std::uint64_t t_us) const {
  const double theta =
      config_.phase_rad + angular_speed_rad_s_ * (double(t_us) * 1e-6);
  return orbit_center_ + config_.orbit_radius_px *
                             Eigen::Vector2d(std::cos(theta), std::sin(theta));
}

SceneFrame Scene::generate(std::uint64_t t_us) const {
  SceneFrame out;
  out.center = center_at(t_us);

  const double r2 = config_.blob_radius_px * config_.blob_radius_px;
  out.color = Image(config_.width, config_.height, 3);
  out.truth_mask = Image(config_.width, config_.height, 1);

  // Render one eye, then copy it across; a pixel belongs to the disc when
  // its center is within the radius.
  for (std::uint16_t y = 0; y < config_.height; ++y) {
    const double dy = (y + 0.5) - out.center.y();
    for (std::uint16_t x = 0; x < eye_width_; ++x) {
      const double dx = (x + 0.5) - out.center.x();
      const bool inside = dx * dx + dy * dy <= r2;
      const auto& rgb = inside ? config_.blob_color : config_.background;
      out.color.at(x, y, 0) = rgb[0];
      out.color.at(x, y, 1) = rgb[1];
      out.color.at(x, y, 2) = rgb[2];
      out.truth_mask.at(x, y, 0) = inside ? 255 : 0;
    }
    if (config_.stereo) {
      auto* row = &out.color.at(0, y, 0);
      std::copy(row, row + std::size_t(eye_width_) * 3,
                row + std::size_t(eye_width_) * 3);
      auto* mrow = &out.truth_mask.at(0, y, 0);
      std::copy(mrow, mrow + eye_width_, mrow + eye_width_);
    }
  }

  const double theta =
      config_.phase_rad + angular_speed_rad_s_ * (double(t_us) * 1e-6);
  out.pose.position = {out.center.x(), out.center.y(), 0.0};
  out.pose.orientation =
      Eigen::Quaterniond(Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitZ()));
  return out;
}

}  // namespace coral::bench
