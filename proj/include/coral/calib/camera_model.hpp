#ifndef CORAL_CALIB_CAMERA_MODEL_HPP_
#define CORAL_CALIB_CAMERA_MODEL_HPP_

#include <Eigen/Core>

#include "coral/errors.hpp"

namespace coral::calib {

struct NoConvergence final : Error {
  using Error::Error;
};
struct NonPositiveDistance final : Error {
  using Error::Error;
};
struct BadCameraModel final : Error {
  using Error::Error;
};

// Pinhole intrinsics plus radial (k1..k3) and tangential (p1, p2)
// distortion coefficients. Focal lengths and principal point are in pixels.
struct CameraModel {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

inline void validate(const CameraModel& model) {
  if (!(model.fx > 0.0) || !(model.fy > 0.0)) {
    throw BadCameraModel("focal lengths must be positive");
  }
}

// Two ways to evaluate the same coefficient set:
//
//  kPixel      offsets and the radius are taken directly in pixel units,
//              with the tangential terms p1*(r^2 + 2*x̄^2) + 2*p2*x̄*ȳ on the
//              x axis and the p1/p2 roles swapped on the y axis.
//  kNormalized the conventional Brown-Conrady form: offsets are divided by
//              the focal lengths first, distortion is applied in normalized
//              coordinates (tangential x term 2*p1*x*y + p2*(r^2 + 2*x^2)),
//              and the result is mapped back through the intrinsics.
//
// The two differ both in the radius scale and in the p1/p2 pairing, so
// coefficients calibrated under one convention are meaningless under the
// other.
enum class DistortionConvention {
  kPixel,
  kNormalized,
};

// Maps an ideal pixel position to its distorted position.
Eigen::Vector2d apply_distortion(
    const CameraModel& model, const Eigen::Vector2d& point,
    DistortionConvention convention = DistortionConvention::kPixel);

// Inverse of apply_distortion by fixed-point iteration (at most 20 rounds,
// update threshold 1e-6 px). Throws NoConvergence when the distortion is too
// strong for the contraction to settle.
Eigen::Vector2d invert_distortion(
    const CameraModel& model, const Eigen::Vector2d& distorted,
    DistortionConvention convention = DistortionConvention::kPixel);

// Scale factors for the planes the camera feed is rendered on, at rendering
// distance d_r (meters) for a feed of resolution (rx, ry): the vertical
// scale comes from the focal length, the horizontal one from the aspect
// ratio.
struct PlaneScale {
  double s_x = 0.0;
  double s_y = 0.0;
  double d_r = 0.0;
};

PlaneScale plane_scale(const CameraModel& model, double rendering_distance,
                       int resolution_x, int resolution_y);

}  // namespace coral::calib

#endif  // CORAL_CALIB_CAMERA_MODEL_HPP_
