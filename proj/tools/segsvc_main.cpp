#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "coral/seg/service.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"segsvc — segmentation server: frames in, 8-bit masks out"};
  std::string config_path;
  std::string router, in_topic, out_topic, segmenter, name;
  double delay_ms = -1.0;

  app.add_option("--config", config_path,
                 "key = value file (node and service keys); flags below "
                 "override it");
  app.add_option("--router", router, "router address host:port");
  app.add_option("--in", in_topic, "topic to consume frames from");
  app.add_option("--out", out_topic, "topic to publish masks on");
  app.add_option("--segmenter", segmenter, "chroma | identity | emulated")
      ->check(CLI::IsMember({"chroma", "identity", "emulated"}));
  app.add_option("--delay-ms", delay_ms,
                 "emulated per-frame budget in milliseconds");
  app.add_option("--name", name, "node name announced to the router");
  CLI11_PARSE(app, argc, argv);

  try {
    coral::seg::ServerConfig config;
    if (!config_path.empty())
      config = coral::seg::server_config_from(
          coral::alga::load_key_values(config_path));
    if (!router.empty()) config.node.router_address = router;
    if (!name.empty()) config.node.node_name = name;
    if (!in_topic.empty()) config.in_topic = in_topic;
    if (!out_topic.empty()) config.out_topic = out_topic;
    if (!segmenter.empty())
      config.kind = coral::seg::segmenter_kind_from(segmenter);
    if (delay_ms >= 0.0) config.emulated_delay_ms = delay_ms;

    coral::seg::Service service(config);
    service.start();
    std::cout << "segsvc: " << coral::seg::to_string(config.kind)
              << " segmenter, " << config.in_topic << " -> "
              << config.out_topic << " via " << config.node.router_address
              << '\n';
    std::cout.flush();

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    auto last_report = std::chrono::steady_clock::now();
    while (!g_stop.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
      const auto now = std::chrono::steady_clock::now();
      if (now - last_report >= std::chrono::seconds(10)) {
        last_report = now;
        const auto s = service.stats();
        std::cout << "segsvc: in " << s.frames_in << ", out " << s.masks_out
                  << ", skipped " << s.skipped << ", mean "
                  << s.processing_mean_ms << " ms, p95 "
                  << s.processing_p95_ms << " ms"
                  << (s.connected ? "" : " (disconnected)") << '\n';
        std::cout.flush();
      }
    }

    const auto s = service.stats();
    std::cout << "segsvc: served " << s.masks_out << " masks from "
              << s.frames_in << " frames, mean " << s.processing_mean_ms
              << " ms\n";
    service.stop();
  } catch (const std::exception& e) {
    std::cerr << "segsvc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
