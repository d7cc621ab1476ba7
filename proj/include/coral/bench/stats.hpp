#ifndef CORAL_BENCH_STATS_HPP_
#define CORAL_BENCH_STATS_HPP_

#include <cstddef>
#include <vector>

#include "coral/errors.hpp"

namespace coral::bench {

struct EmptyInput final : Error {
  using Error::Error;
};

// The three numbers each Table-1-style column reports, plus enough context
// to sanity-check them. "Variance" is stated both ways because a bare
// millisecond figure is ambiguous: variance_ms2 is the unbiased sample
// variance, stddev_ms its square root.
struct SampleStats {
  std::size_t count = 0;
  double mean_ms = 0.0;
  double variance_ms2 = 0.0;  // unbiased (n−1); 0 for a singleton
  double stddev_ms = 0.0;
  double p95_ms = 0.0;        // nearest-rank on the sorted samples
  double min_ms = 0.0;
  double max_ms = 0.0;

  bool operator==(const SampleStats&) const = default;
};

// Throws EmptyInput; a singleton gets variance 0 by convention.
SampleStats compute_stats(const std::vector<double>& samples);

// Nearest-rank percentile: sorted[⌈q·n⌉ − 1], no interpolation.
double percentile(std::vector<double> samples, double q);  // throws EmptyInput

}  // namespace coral::bench

#endif  // CORAL_BENCH_STATS_HPP_
