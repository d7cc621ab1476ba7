#ifndef CORAL_BENCH_REPORT_HPP_
#define CORAL_BENCH_REPORT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "coral/bench/stats.hpp"
#include "coral/errors.hpp"

namespace coral::bench {

struct IoError final : Error {
  using Error::Error;
};

struct ExperimentResult {
  int experiment = 0;            // 1-based
  SampleStats e2e_ms;            // per frame: capture → mask received
  SampleStats rtt_ms;            // per frame: sent → mask received
  SampleStats misalign_px;       // per composited pair
  std::uint64_t frames_sent = 0;
  std::uint64_t masks_received = 0;
  std::uint64_t pairs_composited = 0;
  std::uint64_t drops = 0;       // frames that never reached the display path
  double composited_rate_hz = 0.0;
  bool aborted = false;          // tripped the drop-fraction abort

  bool operator==(const ExperimentResult&) const = default;
};

// Everything a run measured: per-experiment latency statistics plus one
// aggregate end-to-end figure defined explicitly as sum of means — client
// network round trip plus server processing. (The two sides are measured
// independently; nothing forces their printed sum to match any other
// source.)
struct LatencyReport {
  std::string scenario;          // "loopback" | "sim"
  std::string match_mode;        // "sequence" | "time"
  std::string segmenter;
  double delay_ms = 0.0;
  double fps = 0.0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint64_t seed = 0;
  int buffer_frames = 0;         // time-mode FIFO depth in use; 0 otherwise

  double server_mean_ms = 0.0;     // serving side: arrival → mask enqueued
  double network_mean_ms = 0.0;    // client RTT net of server processing
  double aggregate_e2e_ms = 0.0;   // network_mean_ms + server_mean_ms
  SampleStats pooled_e2e_ms;       // every experiment's per-frame E2E pooled

  std::vector<ExperimentResult> experiments;

  bool operator==(const LatencyReport&) const = default;
};

void to_json(nlohmann::json& j, const SampleStats& s);
void from_json(const nlohmann::json& j, SampleStats& s);
void to_json(nlohmann::json& j, const ExperimentResult& e);
void from_json(const nlohmann::json& j, ExperimentResult& e);
void to_json(nlohmann::json& j, const LatencyReport& r);
void from_json(const nlohmann::json& j, LatencyReport& r);

enum class ReportFormat { kCsv, kJson };

// CSV: header `experiment,scenario,mean_ms,variance_ms2,p95_ms,frames,drops`,
// one row per experiment (its E2E series) and, when there is at least one
// experiment, a final aggregate row over the pooled samples.
std::string render_csv(const LatencyReport& report);

// Human-readable tables for the terminal.
std::string render_table(const LatencyReport& report);

void write_report(const LatencyReport& report, const std::string& path,
                  ReportFormat format);  // throws IoError

LatencyReport read_report(const std::string& path);  // JSON; throws IoError

// .json → kJson, anything else → kCsv.
ReportFormat format_for_path(const std::string& path);

}  // namespace coral::bench

#endif  // CORAL_BENCH_REPORT_HPP_
