#ifndef CORAL_BYTE_IO_HPP_
#define CORAL_BYTE_IO_HPP_

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace coral {

// Little-endian scalar append/read over byte vectors. Written out by hand so
// the wire layout never depends on host byte order.

template <typename T>
inline void put_le(std::vector<std::uint8_t>& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

template <typename T>
inline T get_le(std::span<const std::uint8_t> in, std::size_t offset) {
  static_assert(std::is_unsigned_v<T>);
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(in[offset + i]) << (8 * i);
  }
  return value;
}

inline void put_f64_le(std::vector<std::uint8_t>& out, double value) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  put_le<std::uint64_t>(out, bits);
}

inline double get_f64_le(std::span<const std::uint8_t> in, std::size_t offset) {
  const std::uint64_t bits = get_le<std::uint64_t>(in, offset);
  double value;
  std::memcpy(&value, &bits, sizeof(value));
  return value;
}

}  // namespace coral

#endif  // CORAL_BYTE_IO_HPP_
