#include "coral/calib/extrinsic.hpp"

#include <Eigen/Geometry>
#include <cmath>

namespace coral::calib {

ExtrinsicOffset solve_extrinsic(std::span<const PoseCorrespondence> pairs) {
  if (pairs.size() < 2) {
    throw DegenerateConfiguration("need at least 2 correspondence pairs, got " +
                                  std::to_string(pairs.size()));
  }

  Eigen::Vector2d camera_centroid = Eigen::Vector2d::Zero();
  Eigen::Vector2d device_centroid = Eigen::Vector2d::Zero();
  for (const PoseCorrespondence& pair : pairs) {
    camera_centroid += pair.camera;
    device_centroid += pair.device;
  }
  camera_centroid /= static_cast<double>(pairs.size());
  device_centroid /= static_cast<double>(pairs.size());

  // 2-D Procrustes: the optimal angle is atan2 of the cross- and dot-type
  // accumulations of the centered pairs.
  double dot = 0.0;
  double cross = 0.0;
  double spread = 0.0;
  for (const PoseCorrespondence& pair : pairs) {
    const Eigen::Vector2d c = pair.camera - camera_centroid;
    const Eigen::Vector2d d = pair.device - device_centroid;
    dot += c.x() * d.x() + c.y() * d.y();
    cross += c.x() * d.y() - c.y() * d.x();
    spread += c.squaredNorm() + d.squaredNorm();
  }
  if (std::hypot(dot, cross) <= 1e-12 * std::max(spread, 1e-300)) {
    throw DegenerateConfiguration(
        "correspondences carry no rotational information");
  }

  ExtrinsicOffset offset;
  offset.beta = normalize_angle(std::atan2(cross, dot));
  const Eigen::Vector2d t =
      device_centroid - planar_rotation(offset.beta) * camera_centroid;
  offset.delta_x = t.x();
  offset.delta_y = t.y();
  return offset;
}

Eigen::Vector2d apply_planar(const ExtrinsicOffset& offset,
                             const Eigen::Vector2d& point) {
  return planar_rotation(offset.beta) * point +
         Eigen::Vector2d(offset.delta_x, offset.delta_y);
}

wire::PosePayload apply_extrinsic(const ExtrinsicOffset& offset,
                                  const wire::PosePayload& pose) {
  const Eigen::Quaterniond q(
      Eigen::AngleAxisd(offset.beta, Eigen::Vector3d::UnitZ()));
  wire::PosePayload out;
  out.position =
      q * pose.position + Eigen::Vector3d(offset.delta_x, offset.delta_y, 0.0);
  out.orientation = (q * pose.orientation).normalized();
  return out;
}

ExtrinsicOffset inverse(const ExtrinsicOffset& offset) {
  ExtrinsicOffset inv;
  inv.beta = normalize_angle(-offset.beta);
  const Eigen::Vector2d t = -(planar_rotation(inv.beta) *
                              Eigen::Vector2d(offset.delta_x, offset.delta_y));
  inv.delta_x = t.x();
  inv.delta_y = t.y();
  return inv;
}

}  // namespace coral::calib
