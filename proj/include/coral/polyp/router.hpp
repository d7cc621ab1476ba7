#ifndef CORAL_POLYP_ROUTER_HPP_
#define CORAL_POLYP_ROUTER_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "coral/alga/config.hpp"

namespace coral::polyp {

struct RouterConfig {
  std::string bind_address = "127.0.0.1:0";  // port 0 = ephemeral
  std::size_t queue_depth = 4;               // per-subscriber outbound queue
  alga::DropPolicy drop_policy = alga::DropPolicy::kDropOldest;
  // -1 disables the HTTP stats endpoint, 0 picks an ephemeral port.
  int stats_port = -1;
};

namespace detail {
struct RouterCore;
}

// Topic re-router: nodes connect over TCP, declare interest with control
// packets, and every data packet fans out to the current subscribers of its
// topic — never back to its sender. Control packets mutate the tables and
// are not forwarded. Malformed bytes are counted, skipped, and the stream
// resynchronised.
//
// Each subscriber has its own bounded outbound queue, so one stalled peer
// cannot hold up the rest: DROP_OLDEST evicts the oldest queued packet,
// BLOCK applies backpressure to the publishing connection.
class Router {
 public:
  explicit Router(RouterConfig config = {});
  ~Router();
  Router(const Router&) = delete;
  Router& operator=(const Router&) = delete;

  // Binds, starts accepting, and (if configured) serves GET /stats.
  void start();

  // Idempotent; drops every connection and joins all workers.
  void stop();

  std::uint16_t port() const;
  int stats_port() const;  // actual port, -1 when disabled

  // Snapshot: {"router": {...}, "nodes": [names], "topics": {name:
  // {publishers, subscribers, packets_in, packets_out, bytes_in, bytes_out,
  // dropped}}}. Counters cover data packets only; "dropped" counts copies
  // lost to queue eviction plus publishes that reached no subscriber.
  nlohmann::json stats() const;

 private:
  std::shared_ptr<detail::RouterCore> core_;
};

}  // namespace coral::polyp

#endif  // CORAL_POLYP_ROUTER_HPP_
