#include <cmath>

#include "coral/calib/camera_model.hpp"

namespace coral::calib {

namespace {

constexpr int kMaxInvertIterations = 20;
constexpr double kInvertUpdateTolerance = 1e-6;  // pixels

Eigen::Vector2d distort_pixel(const CameraModel& m, const Eigen::Vector2d& p) {
  const double xb = p.x() - m.cx;
  const double yb = p.y() - m.cy;
  const double r2 = xb * xb + yb * yb;
  const double radial = m.k1 * r2 + m.k2 * r2 * r2 + m.k3 * r2 * r2 * r2;
  return {p.x() + xb * radial + m.p1 * (r2 + 2.0 * xb * xb) + 2.0 * m.p2 * xb * yb,
          p.y() + yb * radial + m.p2 * (r2 + 2.0 * yb * yb) + 2.0 * m.p1 * xb * yb};
}

Eigen::Vector2d distort_normalized(const CameraModel& m, const Eigen::Vector2d& p) {
  validate(m);
  const double x = (p.x() - m.cx) / m.fx;
  const double y = (p.y() - m.cy) / m.fy;
  const double r2 = x * x + y * y;
  const double radial = 1.0 + m.k1 * r2 + m.k2 * r2 * r2 + m.k3 * r2 * r2 * r2;
  const double xd = x * radial + 2.0 * m.p1 * x * y + m.p2 * (r2 + 2.0 * x * x);
  const double yd = y * radial + m.p1 * (r2 + 2.0 * y * y) + 2.0 * m.p2 * x * y;
  return {m.cx + m.fx * xd, m.cy + m.fy * yd};
}

}  // namespace

Eigen::Vector2d apply_distortion(const CameraModel& model,
                                 const Eigen::Vector2d& point,
                                 DistortionConvention convention) {
  return convention == DistortionConvention::kPixel
             ? distort_pixel(model, point)
             : distort_normalized(model, point);
}

Eigen::Vector2d invert_distortion(const CameraModel& model,
                                  const Eigen::Vector2d& distorted,
                                  DistortionConvention convention) {
  // x_{n+1} = distorted - (apply(x_n) - x_n); contracts when the distortion
  // correction varies slowly relative to the pixel grid.
  Eigen::Vector2d x = distorted;
  for (int i = 0; i < kMaxInvertIterations; ++i) {
    const Eigen::Vector2d correction =
        apply_distortion(model, x, convention) - x;
    const Eigen::Vector2d next = distorted - correction;
    if (!next.allFinite()) break;
    const double update = (next - x).norm();
    x = next;
    if (update < kInvertUpdateTolerance) return x;
  }
  throw NoConvergence("distortion inversion did not settle after " +
                      std::to_string(kMaxInvertIterations) + " iterations");
}

PlaneScale plane_scale(const CameraModel& model, double rendering_distance,
                       int resolution_x, int resolution_y) {
  validate(model);
  if (!(rendering_distance > 0.0)) {
    throw NonPositiveDistance("rendering distance must be positive, got " +
                              std::to_string(rendering_distance));
  }
  if (resolution_x <= 0 || resolution_y <= 0) {
    throw NonPositiveDistance("resolution must be positive");
  }
  PlaneScale s;
  s.d_r = rendering_distance;
  s.s_y = rendering_distance * resolution_y / model.fy;
  s.s_x = s.s_y * resolution_x / resolution_y;
  return s;
}

}  // namespace coral::calib
