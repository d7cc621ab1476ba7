#ifndef CORAL_BENCH_PIPELINE_HPP_
#define CORAL_BENCH_PIPELINE_HPP_

#include <cstdint>
#include <vector>

#include "coral/bench/report.hpp"
#include "coral/bench/scene.hpp"
#include "coral/buffers/frame_match.hpp"
#include "coral/errors.hpp"
#include "coral/seg/segmenter.hpp"

namespace coral::bench {

struct BadPipelineConfig final : Error {
  using Error::Error;
};

// One frame's trip through the pipeline, every hop timestamped with the
// same monotonic clock so the series can be differenced directly.
struct LatencySample {
  std::uint64_t sequence = 0;
  std::uint64_t t_capture_us = 0;        // scene rendered
  std::uint64_t t_sent_us = 0;           // handed to the transport
  std::uint64_t t_mask_received_us = 0;  // mask back at the client (0 = lost)
  std::uint64_t t_composited_us = 0;     // matched with a color frame (0 = never)
};

enum class Transport {
  kLoopback,  // real sockets through an in-process router and server
  kSim,       // virtual-time model with exact, configurable link delays
};

struct PipelineConfig {
  int experiments = 4;
  int frames_per_experiment = 1000;
  SceneConfig scene;
  seg::SegmenterKind segmenter = seg::SegmenterKind::kEmulated;
  double delay_ms = 16.7;  // emulated server budget per frame
  seg::ChromaConfig chroma;
  buffers::MatchMode match_mode = buffers::MatchMode::kSequence;
  int buffer_frames = -1;  // time-mode FIFO depth; -1 sizes it from the
                           // expected round trip and the frame period
  std::uint64_t seed = 1;
  Transport transport = Transport::kLoopback;
  double sim_uplink_ms = 5.0;    // kSim only
  double sim_downlink_ms = 5.0;  // kSim only
  double abort_drop_fraction = 0.5;  // give up on an experiment past this
};

void validate(const PipelineConfig& config);

struct PipelineResult {
  LatencyReport report;
  // Parallel to report.experiments.
  std::vector<std::vector<LatencySample>> samples;
  std::vector<std::vector<double>> e2e_series_ms;      // per received mask
  std::vector<std::vector<double>> misalign_series_px; // per composited pair
};

// Runs the configured experiments back to back and aggregates them the way
// the report defines: per-experiment stats over each E2E series, then one
// aggregate end-to-end mean formed as network mean + server mean.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace coral::bench

#endif  // CORAL_BENCH_PIPELINE_HPP_
