#ifndef CORAL_CALIB_EXTRINSIC_HPP_
#define CORAL_CALIB_EXTRINSIC_HPP_

#include <Eigen/Core>
#include <span>
#include <vector>

#include "coral/errors.hpp"
#include "coral/wire/pose.hpp"

namespace coral::calib {

struct DegenerateConfiguration final : Error {
  using Error::Error;
};

// Rigid planar offset between the camera frame and the device frame: rotate
// by beta, then translate by (delta_x, delta_y). The calibration plane is
// the x-y plane of a frame whose +z axis is the device's horizontal (pitch)
// axis, so beta is the camera tilt about that axis. beta is kept in
// (-pi, pi].
struct ExtrinsicOffset {
  double delta_x = 0.0;
  double delta_y = 0.0;
  double beta = 0.0;
};

// One tracked-controller observation: its planar position as reported by
// the device and as measured by the camera, in the same metric units.
struct PoseCorrespondence {
  Eigen::Vector2d device = Eigen::Vector2d::Zero();
  Eigen::Vector2d camera = Eigen::Vector2d::Zero();
};

inline double normalize_angle(double a) {
  // Wrap into (-pi, pi].
  a = std::remainder(a, 2.0 * M_PI);
  return a <= -M_PI ? a + 2.0 * M_PI : a;
}

inline Eigen::Matrix2d planar_rotation(double beta) {
  Eigen::Matrix2d r;
  r << std::cos(beta), -std::sin(beta), std::sin(beta), std::cos(beta);
  return r;
}

// Least-squares rigid transform minimizing sum |R(beta)*camera + t - device|^2,
// closed-form via centroid subtraction and the 2-D orthogonal-Procrustes
// angle. Throws DegenerateConfiguration when fewer than two pairs are given
// or the points carry no rotational information (all coincident).
ExtrinsicOffset solve_extrinsic(std::span<const PoseCorrespondence> pairs);

// R(beta)*p + t on calibration-plane points.
Eigen::Vector2d apply_planar(const ExtrinsicOffset& offset,
                             const Eigen::Vector2d& point);

// Composes the planar offset with a full pose: the rotation acts about the
// +z axis of the calibration frame, the translation in its x-y plane.
wire::PosePayload apply_extrinsic(const ExtrinsicOffset& offset,
                                  const wire::PosePayload& pose);

// The offset undoing this one: apply_extrinsic(inverse(o), apply_extrinsic(o, p)) == p.
ExtrinsicOffset inverse(const ExtrinsicOffset& offset);

}  // namespace coral::calib

#endif  // CORAL_CALIB_EXTRINSIC_HPP_
