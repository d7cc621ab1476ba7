#include "coral/wire/pose.hpp"

#include <cmath>

#include "coral/byte_io.hpp"

namespace coral::wire {

std::vector<std::uint8_t> encode_pose_payload(const PosePayload& pose) {
  if (std::abs(pose.orientation.norm() - 1.0) > kQuaternionNormTolerance) {
    throw NonUnitQuaternion("orientation quaternion norm " +
                            std::to_string(pose.orientation.norm()));
  }
  std::vector<std::uint8_t> out;
  out.reserve(kPosePayloadBytes);
  put_f64_le(out, pose.position.x());
  put_f64_le(out, pose.position.y());
  put_f64_le(out, pose.position.z());
  put_f64_le(out, pose.orientation.w());
  put_f64_le(out, pose.orientation.x());
  put_f64_le(out, pose.orientation.y());
  put_f64_le(out, pose.orientation.z());
  return out;
}

PosePayload decode_pose_payload(std::span<const std::uint8_t> payload) {
  if (payload.size() != kPosePayloadBytes) {
    throw BadPosePayload("pose payload must be 56 bytes, got " +
                         std::to_string(payload.size()));
  }
  PosePayload pose;
  pose.position.x() = get_f64_le(payload, 0);
  pose.position.y() = get_f64_le(payload, 8);
  pose.position.z() = get_f64_le(payload, 16);
  pose.orientation.w() = get_f64_le(payload, 24);
  pose.orientation.x() = get_f64_le(payload, 32);
  pose.orientation.y() = get_f64_le(payload, 40);
  pose.orientation.z() = get_f64_le(payload, 48);
  if (!pose.position.allFinite() || !pose.orientation.coeffs().allFinite()) {
    throw BadPosePayload("pose payload holds non-finite values");
  }
  if (std::abs(pose.orientation.norm() - 1.0) > kQuaternionNormTolerance) {
    throw BadPosePayload("orientation quaternion is not unit norm");
  }
  return pose;
}

}  // namespace coral::wire
