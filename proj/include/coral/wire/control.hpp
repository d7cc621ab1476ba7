#ifndef CORAL_WIRE_CONTROL_HPP_
#define CORAL_WIRE_CONTROL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coral::wire {

// Control packets reuse the frame format with payload_type = kControl: the
// topic field names the subject (the topic being advertised/subscribed, or
// the node name for hello/heartbeat) and the payload is a single verb byte.
enum class ControlVerb : std::uint8_t {
  kHello = 1,
  kAdvertise = 2,
  kSubscribe = 3,
  kUnsubscribe = 4,
  kHeartbeat = 5,
};

// Liveness convention, both directions: send a heartbeat after one second
// of outbound silence, declare the peer dead after three seconds of inbound
// silence.
inline constexpr std::uint64_t kHeartbeatPeriodUs = 1'000'000;
inline constexpr std::uint64_t kLivenessTimeoutUs = 3'000'000;

inline std::vector<std::uint8_t> encode_control_payload(ControlVerb verb) {
  return {static_cast<std::uint8_t>(verb)};
}

inline std::optional<ControlVerb> decode_control_payload(
    std::span<const std::uint8_t> payload) {
  if (payload.size() != 1) return std::nullopt;
  const std::uint8_t raw = payload[0];
  if (raw < static_cast<std::uint8_t>(ControlVerb::kHello) ||
      raw > static_cast<std::uint8_t>(ControlVerb::kHeartbeat)) {
    return std::nullopt;
  }
  return static_cast<ControlVerb>(raw);
}

}  // namespace coral::wire

#endif  // CORAL_WIRE_CONTROL_HPP_
