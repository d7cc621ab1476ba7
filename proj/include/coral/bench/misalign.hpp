#ifndef CORAL_BENCH_MISALIGN_HPP_
#define CORAL_BENCH_MISALIGN_HPP_

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "coral/errors.hpp"
#include "coral/image.hpp"

namespace coral::bench {

struct EmptyMask final : Error {
  using Error::Error;
};
struct EmptyBlob final : Error {
  using Error::Error;
};
struct DimensionMismatch final : Error {
  using Error::Error;
};

// Centroid (pixel centers) of the pixels exactly matching `color`; throws
// EmptyBlob when none do.
Eigen::Vector2d color_centroid(const Image& frame,
                               const std::array<std::uint8_t, 3>& color);

// Centroid of the nonzero mask pixels; throws EmptyMask on an all-zero mask.
Eigen::Vector2d mask_centroid(const Image& mask);

// How far the mask sits from the object it is supposed to cover: Euclidean
// distance between the frame's blob centroid and the mask's foreground
// centroid. Zero for a ground-truth mask; a stale mask trails the blob by
// speed × lag.
double misalignment_px(const Image& frame, const Image& mask,
                       const std::array<std::uint8_t, 3>& blob_color);

}  // namespace coral::bench

#endif  // CORAL_BENCH_MISALIGN_HPP_
