#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coral/bench/pipeline.hpp"
#include "coral/bench/report.hpp"
#include "coral/buffers/frame_match.hpp"

namespace {

using namespace coral;

bool parse_resolution(const std::string& text, bench::SceneConfig& scene) {
  unsigned w = 0;
  unsigned h = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%ux%u%c", &w, &h, &extra) != 2) return false;
  if (w == 0 || h == 0 || w > 0xFFFF || h > 0xFFFF) return false;
  scene.width = static_cast<std::uint16_t>(w);
  scene.height = static_cast<std::uint16_t>(h);
  return true;
}

// The invariants --check enforces; returns the violations found.
std::vector<std::string> check_report(const bench::LatencyReport& rep,
                                      const bench::PipelineConfig& cfg) {
  std::vector<std::string> bad;
  const double period_s = 1.0 / cfg.scene.fps;
  for (const auto& e : rep.experiments) {
    if (e.aborted)
      bad.push_back("experiment " + std::to_string(e.experiment) +
                    " aborted (lost more than half its frames)");
    if (e.composited_rate_hz < 0.9 * cfg.scene.fps)
      bad.push_back("experiment " + std::to_string(e.experiment) +
                    " composited at " + std::to_string(e.composited_rate_hz) +
                    " Hz, below 90% of " + std::to_string(cfg.scene.fps));
  }

  // Alignment invariant: composited pairs stay within half a frame of blob
  // travel. Sequence matching and a correctly sized FIFO leave far less;
  // an undersized queue exceeds a full frame by construction.
  const double limit_px =
      std::max(1.0, 0.5 * cfg.scene.blob_speed_px_s * period_s);
  for (const auto& e : rep.experiments) {
    if (e.misalign_px.count == 0) {
      bad.push_back("experiment " + std::to_string(e.experiment) +
                    " composited nothing");
      continue;
    }
    if (e.misalign_px.mean_ms > limit_px)
      bad.push_back("experiment " + std::to_string(e.experiment) +
                    " mean misalignment " +
                    std::to_string(e.misalign_px.mean_ms) +
                    " px exceeds " + std::to_string(limit_px) + " px");
  }
  return bad;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bench — end-to-end latency and misalignment harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run experiments and write a report");
  bench::PipelineConfig cfg;
  std::string resolution = "1280x480";
  std::string segmenter = "emulated";
  std::string match_mode = "sequence";
  std::string transport = "loopback";
  std::string report_path;
  bool check = false;
  run->add_option("--experiments", cfg.experiments, "experiments to run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--frames", cfg.frames_per_experiment,
                  "frames per experiment")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--resolution", resolution, "stereo frame size WxH")
      ->capture_default_str();
  run->add_option("--fps", cfg.scene.fps, "capture rate")
      ->capture_default_str();
  run->add_option("--segmenter", segmenter, "chroma | identity | emulated")
      ->check(CLI::IsMember({"chroma", "identity", "emulated"}))
      ->capture_default_str();
  run->add_option("--delay-ms", cfg.delay_ms, "emulated server budget")
      ->capture_default_str();
  run->add_option("--match-mode", match_mode, "sequence | time")
      ->check(CLI::IsMember({"sequence", "time"}))
      ->capture_default_str();
  run->add_option("--buffer-frames", cfg.buffer_frames,
                  "time-mode FIFO depth (-1 sizes from the round trip)")
      ->capture_default_str();
  run->add_option("--report", report_path,
                  "output file; .json keeps everything, anything else gets "
                  "the CSV table");
  run->add_option("--seed", cfg.seed, "scene phase seed")
      ->capture_default_str();
  run->add_option("--transport", transport,
                  "loopback (real sockets) | sim (virtual time)")
      ->check(CLI::IsMember({"loopback", "sim"}))
      ->capture_default_str();
  run->add_option("--uplink-ms", cfg.sim_uplink_ms, "sim frame uplink delay")
      ->capture_default_str();
  run->add_option("--downlink-ms", cfg.sim_downlink_ms,
                  "sim mask downlink delay")
      ->capture_default_str();
  run->add_flag("--check", check,
                "exit nonzero unless every experiment finished, composited "
                "at >= 90% of fps, and mean misalignment stayed under half "
                "a frame of blob travel");

  auto* replay = app.add_subcommand("replay", "reprint tables from a report");
  std::string replay_path;
  std::string replay_csv;
  replay->add_option("--report", replay_path, "JSON report to load")
      ->required();
  replay->add_option("--csv", replay_csv, "also re-emit the CSV table here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      if (!parse_resolution(resolution, cfg.scene)) {
        std::cerr << "bench: bad --resolution " << resolution
                  << " (want WxH)\n";
        return 1;
      }
      cfg.segmenter = seg::segmenter_kind_from(segmenter);
      cfg.match_mode = buffers::match_mode_from(match_mode);
      cfg.transport = transport == "sim" ? bench::Transport::kSim
                                         : bench::Transport::kLoopback;

      const bench::PipelineResult result = bench::run_pipeline(cfg);
      std::cout << bench::render_table(result.report);
      if (!report_path.empty()) {
        bench::write_report(result.report, report_path,
                            bench::format_for_path(report_path));
        std::cout << "report written to " << report_path << '\n';
      }
      if (check) {
        const auto bad = check_report(result.report, cfg);
        for (const auto& reason : bad) std::cerr << "check: " << reason << '\n';
        if (!bad.empty()) return 2;
        std::cout << "check: all invariants hold\n";
      }
    } else {
      const bench::LatencyReport rep = bench::read_report(replay_path);
      std::cout << bench::render_table(rep);
      if (!replay_csv.empty()) {
        bench::write_report(rep, replay_csv, bench::ReportFormat::kCsv);
        std::cout << "csv written to " << replay_csv << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
