#ifndef CORAL_WIRE_POSE_HPP_
#define CORAL_WIRE_POSE_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <span>
#include <vector>

#include "coral/errors.hpp"

namespace coral::wire {

struct NonUnitQuaternion final : Error {
  using Error::Error;
};
struct BadPosePayload final : Error {
  using Error::Error;
};

// Position in meters plus a unit orientation quaternion. This is the payload
// carried by kPose packets; the stereo-camera pose stream feeding the delay
// alignment buffer is made of these.
struct PosePayload {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  bool operator==(const PosePayload& other) const {
    return position == other.position &&
           orientation.coeffs() == other.orientation.coeffs();
  }
};

inline constexpr std::size_t kPosePayloadBytes = 7 * sizeof(double);
inline constexpr double kQuaternionNormTolerance = 1e-9;

// 56-byte layout: position x,y,z then quaternion w,x,y,z, each f64
// little-endian. Throws NonUnitQuaternion when |norm - 1| > 1e-9.
std::vector<std::uint8_t> encode_pose_payload(const PosePayload& pose);

// Throws BadPosePayload on wrong size, non-finite values, or a non-unit
// quaternion.
PosePayload decode_pose_payload(std::span<const std::uint8_t> payload);

}  // namespace coral::wire

#endif  // CORAL_WIRE_POSE_HPP_
