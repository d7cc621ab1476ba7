#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "coral/polyp/router.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyp — topic re-router between publishing and subscribing "
               "nodes"};
  coral::polyp::RouterConfig config;
  config.bind_address = "0.0.0.0:7777";
  std::string policy = "drop_oldest";

  app.add_option("--bind", config.bind_address,
                 "host:port to listen on (port 0 picks one)")
      ->capture_default_str();
  app.add_option("--stats-port", config.stats_port,
                 "HTTP port serving GET /stats as JSON (-1 disables, 0 "
                 "picks one)")
      ->capture_default_str();
  app.add_option("--queue-depth", config.queue_depth,
                 "per-subscriber forwarding queue depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--drop-policy", policy, "drop_oldest | block")
      ->check(CLI::IsMember({"drop_oldest", "block"}))
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    config.drop_policy = coral::alga::drop_policy_from(policy);
    coral::polyp::Router router(config);
    router.start();
    std::cout << "polyp listening on " << config.bind_address << " (port "
              << router.port() << ")\n";
    if (router.stats_port() > 0)
      std::cout << "stats at http://localhost:" << router.stats_port()
                << "/stats\n";
    std::cout.flush();

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop.load())
      std::this_thread::sleep_for(std::chrono::milliseconds(200));

    std::cout << router.stats().dump(2) << '\n';
    router.stop();
  } catch (const std::exception& e) {
    std::cerr << "polyp: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
