#include "coral/bench/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace coral::bench {
namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void csv_row(std::ostringstream& out, const std::string& label,
             const std::string& scenario, const SampleStats& s,
             std::uint64_t frames, std::uint64_t drops) {
  out << label << ',' << scenario << ',' << fixed(s.mean_ms) << ','
      << fixed(s.variance_ms2) << ',' << fixed(s.p95_ms) << ',' << frames
      << ',' << drops << '\n';
}

}  // namespace

void to_json(nlohmann::json& j, const SampleStats& s) {
  j = {{"count", s.count},         {"mean_ms", s.mean_ms},
       {"variance_ms2", s.variance_ms2}, {"stddev_ms", s.stddev_ms},
       {"p95_ms", s.p95_ms},       {"min_ms", s.min_ms},
       {"max_ms", s.max_ms}};
}

void from_json(const nlohmann::json& j, SampleStats& s) {
  j.at("count").get_to(s.count);
  j.at("mean_ms").get_to(s.mean_ms);
  j.at("variance_ms2").get_to(s.variance_ms2);
  j.at("stddev_ms").get_to(s.stddev_ms);
  j.at("p95_ms").get_to(s.p95_ms);
  j.at("min_ms").get_to(s.min_ms);
  j.at("max_ms").get_to(s.max_ms);
}

void to_json(nlohmann::json& j, const ExperimentResult& e) {
  j = {{"experiment", e.experiment},
       {"e2e_ms", e.e2e_ms},
       {"rtt_ms", e.rtt_ms},
       {"misalign_px", e.misalign_px},
       {"frames_sent", e.frames_sent},
       {"masks_received", e.masks_received},
       {"pairs_composited", e.pairs_composited},
       {"drops", e.drops},
       {"composited_rate_hz", e.composited_rate_hz},
       {"aborted", e.aborted}};
}

void from_json(const nlohmann::json& j, ExperimentResult& e) {
  j.at("experiment").get_to(e.experiment);
  j.at("e2e_ms").get_to(e.e2e_ms);
  j.at("rtt_ms").get_to(e.rtt_ms);
  j.at("misalign_px").get_to(e.misalign_px);
  j.at("frames_sent").get_to(e.frames_sent);
  j.at("masks_received").get_to(e.masks_received);
  j.at("pairs_composited").get_to(e.pairs_composited);
  j.at("drops").get_to(e.drops);
  j.at("composited_rate_hz").get_to(e.composited_rate_hz);
  j.at("aborted").get_to(e.aborted);
}

void to_json(nlohmann::json& j, const LatencyReport& r) {
  j = {{"scenario", r.scenario},
       {"match_mode", r.match_mode},
       {"segmenter", r.segmenter},
       {"delay_ms", r.delay_ms},
       {"fps", r.fps},
       {"width", r.width},
       {"height", r.height},
       {"seed", r.seed},
       {"buffer_frames", r.buffer_frames},
       {"server_mean_ms", r.server_mean_ms},
       {"network_mean_ms", r.network_mean_ms},
       {"aggregate_e2e_ms", r.aggregate_e2e_ms},
       {"pooled_e2e_ms", r.pooled_e2e_ms},
       {"experiments", r.experiments}};
}

void from_json(const nlohmann::json& j, LatencyReport& r) {
  j.at("scenario").get_to(r.scenario);
  j.at("match_mode").get_to(r.match_mode);
  j.at("segmenter").get_to(r.segmenter);
  j.at("delay_ms").get_to(r.delay_ms);
  j.at("fps").get_to(r.fps);
  j.at("width").get_to(r.width);
  j.at("height").get_to(r.height);
  j.at("seed").get_to(r.seed);
  j.at("buffer_frames").get_to(r.buffer_frames);
  j.at("server_mean_ms").get_to(r.server_mean_ms);
  j.at("network_mean_ms").get_to(r.network_mean_ms);
  j.at("aggregate_e2e_ms").get_to(r.aggregate_e2e_ms);
  j.at("pooled_e2e_ms").get_to(r.pooled_e2e_ms);
  j.at("experiments").get_to(r.experiments);
}

std::string render_csv(const LatencyReport& report) {
  std::ostringstream out;
  out << "experiment,scenario,mean_ms,variance_ms2,p95_ms,frames,drops\n";
  std::uint64_t frames = 0;
  std::uint64_t drops = 0;
  for (const auto& e : report.experiments) {
    csv_row(out, std::to_string(e.experiment), report.scenario, e.e2e_ms,
            e.frames_sent, e.drops);
    frames += e.frames_sent;
    drops += e.drops;
  }
  if (!report.experiments.empty())
    csv_row(out, "aggregate", report.scenario, report.pooled_e2e_ms, frames,
            drops);
  return out.str();
}

std::string render_table(const LatencyReport& report) {
  std::ostringstream out;
  out << "scenario " << report.scenario << ", " << report.segmenter
      << " segmenter, " << report.match_mode << " matching, "
      << fixed(report.fps, 1) << " fps, " << report.width << 'x'
      << report.height << ", seed " << report.seed << "\n\n";
  out << "  exp    mean ms     var ms^2     p95 ms   frames    pairs  "
         "drops   misalign px\n";
  for (const auto& e : report.experiments) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "  %3d %10.3f %12.4f %10.3f %8llu %8llu %6llu %13.3f%s\n",
                  e.experiment, e.e2e_ms.mean_ms, e.e2e_ms.variance_ms2,
                  e.e2e_ms.p95_ms,
                  static_cast<unsigned long long>(e.frames_sent),
                  static_cast<unsigned long long>(e.pairs_composited),
                  static_cast<unsigned long long>(e.drops),
                  e.misalign_px.mean_ms, e.aborted ? "  ABORTED" : "");
    out << line;
  }
  out << '\n';
  out << "  network mean   " << fixed(report.network_mean_ms, 3) << " ms\n";
  out << "  server mean    " << fixed(report.server_mean_ms, 3) << " ms\n";
  out << "  e2e (sum)      " << fixed(report.aggregate_e2e_ms, 3) << " ms\n";
  out << "  e2e (pooled)   mean " << fixed(report.pooled_e2e_ms.mean_ms, 3)
      << " ms, stddev " << fixed(report.pooled_e2e_ms.stddev_ms, 3)
      << " ms, p95 " << fixed(report.pooled_e2e_ms.p95_ms, 3) << " ms over "
      << report.pooled_e2e_ms.count << " frames\n";
  return out.str();
}

void write_report(const LatencyReport& report, const std::string& path,
                  ReportFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  if (format == ReportFormat::kCsv) {
    out << render_csv(report);
  } else {
    out << nlohmann::json(report).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

LatencyReport read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
    return j.get<LatencyReport>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad report " + path + ": " + e.what());
  }
}

ReportFormat format_for_path(const std::string& path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
    return ReportFormat::kJson;
  return ReportFormat::kCsv;
}

}  // namespace coral::bench
