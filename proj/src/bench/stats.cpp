#include "coral/bench/stats.hpp"

#include <algorithm>
#include <cmath>

namespace coral::bench {

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw EmptyInput("percentile of nothing");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
  if (rank == 0) rank = 1;
  if (rank > samples.size()) rank = samples.size();
  return samples[rank - 1];
}

SampleStats compute_stats(const std::vector<double>& samples) {
  if (samples.empty()) throw EmptyInput("stats of nothing");
  SampleStats s;
  s.count = samples.size();

  double sum = 0.0;
  s.min_ms = samples.front();
  s.max_ms = samples.front();
  for (const double v : samples) {
    sum += v;
    s.min_ms = std::min(s.min_ms, v);
    s.max_ms = std::max(s.max_ms, v);
  }
  s.mean_ms = sum / double(s.count);

  if (s.count > 1) {
    double acc = 0.0;
    for (const double v : samples) {
      const double d = v - s.mean_ms;
      acc += d * d;
    }
    s.variance_ms2 = acc / double(s.count - 1);
    s.stddev_ms = std::sqrt(s.variance_ms2);
  }
  s.p95_ms = percentile(samples, 0.95);
  return s;
}

}  // namespace coral::bench
