#include "coral/polyp/router.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include <httplib.h>

#include "coral/clock.hpp"
#include "coral/net/tcp.hpp"
#include "coral/wire/control.hpp"
#include "coral/wire/stream.hpp"

namespace coral::polyp {

namespace detail {

namespace {

struct QueueItem {
  std::shared_ptr<const std::vector<std::uint8_t>> bytes;
  std::string topic;
};

struct Connection {
  explicit Connection(net::TcpSocket s) : socket(std::move(s)) {}

  net::TcpSocket socket;
  std::string name;
  bool open = true;

  std::deque<QueueItem> queue;
  std::condition_variable cv;        // writer: work / shutdown
  std::condition_variable drain_cv;  // BLOCK publishers: space freed
  std::uint64_t control_sequence = 0;
  std::uint64_t last_send_us = 0;
  std::uint64_t last_recv_us = 0;

  std::set<std::string> subscribed;
  std::set<std::string> advertised;

  std::thread reader;
  std::thread writer;
};

struct TopicCounters {
  std::uint64_t packets_in = 0;
  std::uint64_t packets_out = 0;
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
  std::uint64_t dropped = 0;
};

}  // namespace

struct RouterCore {
  explicit RouterCore(RouterConfig cfg) : config(std::move(cfg)) {}

  RouterConfig config;
  net::TcpListener listener;

  mutable std::mutex mutex;
  bool running = false;
  std::uint64_t next_peer_id = 0;
  std::uint64_t malformed = 0;
  std::vector<std::shared_ptr<Connection>> connections;
  std::map<std::string, std::vector<std::shared_ptr<Connection>>> subs_by_topic;
  std::map<std::string, TopicCounters> counters;

  std::thread acceptor;
  httplib::Server stats_server;
  std::thread stats_thread;
  int stats_port = -1;
};

namespace {

// Requires core.mutex. Takes the connection out of every table and wakes its
// threads; the acceptor (or stop()) joins them later.
void evict(RouterCore& core, Connection& conn) {
  if (!conn.open) return;
  conn.open = false;
  conn.socket.shutdown();
  for (const auto& topic : conn.subscribed) {
    const auto it = core.subs_by_topic.find(topic);
    if (it == core.subs_by_topic.end()) continue;
    std::erase_if(it->second,
                  [&](const auto& sub) { return sub.get() == &conn; });
    if (it->second.empty()) core.subs_by_topic.erase(it);
  }
  conn.subscribed.clear();
  conn.cv.notify_all();
  conn.drain_cv.notify_all();
}

// Requires core.mutex.
void handle_control(RouterCore& core, const std::shared_ptr<Connection>& conn,
                    const wire::FramePacket& packet) {
  const auto verb = wire::decode_control_payload(packet.payload);
  if (!verb) return;  // decode_packet already vetted this; belt and braces
  switch (*verb) {
    case wire::ControlVerb::kHello:
      if (!packet.topic.empty()) conn->name = packet.topic;
      break;
    case wire::ControlVerb::kAdvertise:
      conn->advertised.insert(packet.topic);
      break;
    case wire::ControlVerb::kSubscribe: {
      if (!conn->subscribed.insert(packet.topic).second) break;
      core.subs_by_topic[packet.topic].push_back(conn);
      break;
    }
    case wire::ControlVerb::kUnsubscribe: {
      if (conn->subscribed.erase(packet.topic) == 0) break;
      const auto it = core.subs_by_topic.find(packet.topic);
      if (it == core.subs_by_topic.end()) break;
      std::erase(it->second, conn);
      if (it->second.empty()) core.subs_by_topic.erase(it);
      break;
    }
    case wire::ControlVerb::kHeartbeat:
      break;  // receipt already refreshed liveness
  }
}

// Requires lock on core.mutex (released while a BLOCK enqueue waits).
void forward(RouterCore& core, std::unique_lock<std::mutex>& lock,
             const std::shared_ptr<Connection>& sender,
             const wire::FramePacket& packet) {
  const auto bytes = std::make_shared<const std::vector<std::uint8_t>>(
      wire::encode_packet(packet));
  auto& counters = core.counters[packet.topic];
  ++counters.packets_in;
  counters.bytes_in += bytes->size();

  const auto it = core.subs_by_topic.find(packet.topic);
  std::vector<std::shared_ptr<Connection>> targets;
  if (it != core.subs_by_topic.end()) {
    for (const auto& sub : it->second) {
      if (sub != sender) targets.push_back(sub);
    }
  }
  if (targets.empty()) {
    ++counters.dropped;
    return;
  }

  for (const auto& sub : targets) {
    if (!sub->open) continue;
    if (sub->queue.size() >= core.config.queue_depth) {
      if (core.config.drop_policy == alga::DropPolicy::kDropOldest) {
        ++core.counters[sub->queue.front().topic].dropped;
        sub->queue.pop_front();
      } else {
        sub->drain_cv.wait(lock, [&] {
          return !core.running || !sub->open ||
                 sub->queue.size() < core.config.queue_depth;
        });
        if (!core.running || !sub->open) continue;
      }
    }
    sub->queue.push_back({bytes, packet.topic});
    auto& out = core.counters[packet.topic];
    ++out.packets_out;
    out.bytes_out += bytes->size();
    sub->cv.notify_all();
  }
}

void reader_loop(const std::shared_ptr<RouterCore>& core,
                 const std::shared_ptr<Connection>& conn) {
  wire::StreamDecoder decoder;
  std::vector<std::uint8_t> buf(64 * 1024);

  while (true) {
    {
      std::lock_guard lock(core->mutex);
      if (!core->running || !conn->open) return;
    }
    if (!conn->socket.wait_readable(250)) {
      std::lock_guard lock(core->mutex);
      if (now_us() - conn->last_recv_us > wire::kLivenessTimeoutUs) {
        evict(*core, *conn);
        return;
      }
      continue;
    }

    std::size_t n = 0;
    try {
      n = conn->socket.recv_some(buf.data(), buf.size());
    } catch (const Error&) {
      n = 0;
    }
    std::unique_lock lock(core->mutex);
    if (n == 0 || !core->running || !conn->open) {
      evict(*core, *conn);
      return;
    }
    conn->last_recv_us = now_us();
    decoder.feed(std::span(buf.data(), n));
    for (auto next = decoder.next(); next.more(); next = decoder.next()) {
      if (next.skipped) {
        ++core->malformed;
        continue;
      }
      if (next.packet->header.payload_type == wire::PayloadType::kControl) {
        handle_control(*core, conn, *next.packet);
      } else {
        forward(*core, lock, conn, *next.packet);
        if (!core->running || !conn->open) {  // may have changed while blocked
          evict(*core, *conn);
          return;
        }
      }
    }
  }
}

void writer_loop(const std::shared_ptr<RouterCore>& core,
                 const std::shared_ptr<Connection>& conn) {
  std::unique_lock lock(core->mutex);
  const auto have_work = [&] {
    return !core->running || !conn->open || !conn->queue.empty();
  };

  while (core->running && conn->open) {
    if (!have_work()) {
      conn->cv.wait_until(
          lock, time_point_from_us(conn->last_send_us + wire::kHeartbeatPeriodUs),
          have_work);
    }
    if (!core->running || !conn->open) break;

    std::shared_ptr<const std::vector<std::uint8_t>> bytes;
    if (!conn->queue.empty()) {
      bytes = std::move(conn->queue.front().bytes);
      conn->queue.pop_front();
      conn->drain_cv.notify_all();
    } else if (now_us() >= conn->last_send_us + wire::kHeartbeatPeriodUs) {
      wire::FramePacket beat;
      beat.topic = "polyp";
      beat.header.payload_type = wire::PayloadType::kControl;
      beat.header.sequence = conn->control_sequence++;
      beat.header.timestamp_us = now_us();
      beat.payload = wire::encode_control_payload(wire::ControlVerb::kHeartbeat);
      bytes = std::make_shared<const std::vector<std::uint8_t>>(
          wire::encode_packet(beat));
    } else {
      continue;
    }

    lock.unlock();
    bool sent = false;
    try {
      conn->socket.send_all(*bytes);
      sent = true;
    } catch (const Error&) {
    }
    lock.lock();
    if (!sent) {
      evict(*core, *conn);
      break;
    }
    conn->last_send_us = now_us();
  }
}

void accept_loop(const std::shared_ptr<RouterCore>& core) {
  while (true) {
    {
      std::lock_guard lock(core->mutex);
      if (!core->running) return;
    }

    std::optional<net::TcpSocket> accepted;
    try {
      accepted = core->listener.accept(250);
    } catch (const Error&) {
      return;  // listener closed under us: stop() is in progress
    }

    // Reap connections whose threads have finished with their sockets.
    std::vector<std::shared_ptr<Connection>> dead;
    {
      std::lock_guard lock(core->mutex);
      for (auto it = core->connections.begin();
           it != core->connections.end();) {
        if (!(*it)->open) {
          dead.push_back(std::move(*it));
          it = core->connections.erase(it);
        } else {
          ++it;
        }
      }
    }
    for (const auto& conn : dead) {
      if (conn->reader.joinable()) conn->reader.join();
      if (conn->writer.joinable()) conn->writer.join();
    }

    if (!accepted) continue;
    auto conn = std::make_shared<Connection>(std::move(*accepted));
    std::lock_guard lock(core->mutex);
    if (!core->running) return;
    conn->name = "peer-" + std::to_string(core->next_peer_id++);
    conn->last_send_us = now_us();
    conn->last_recv_us = now_us();
    conn->reader = std::thread([core, conn] { reader_loop(core, conn); });
    conn->writer = std::thread([core, conn] { writer_loop(core, conn); });
    core->connections.push_back(std::move(conn));
  }
}

}  // namespace

}  // namespace detail

Router::Router(RouterConfig config)
    : core_(std::make_shared<detail::RouterCore>(std::move(config))) {}

Router::~Router() { stop(); }

void Router::start() {
  {
    std::lock_guard lock(core_->mutex);
    if (core_->running) return;
    core_->listener = net::TcpListener::bind(core_->config.bind_address);
    core_->running = true;
  }
  auto core = core_;
  core_->acceptor = std::thread([core] { detail::accept_loop(core); });

  if (core_->config.stats_port >= 0) {
    auto snapshot = [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(stats().dump(2), "application/json");
    };
    core_->stats_server.Get("/stats", snapshot);
    core_->stats_server.Get("/", snapshot);
    const std::string host =
        core_->config.bind_address.substr(0, core_->config.bind_address.rfind(':'));
    if (core_->config.stats_port == 0) {
      core_->stats_port = core_->stats_server.bind_to_any_port(host);
    } else {
      core_->stats_server.bind_to_port(host, core_->config.stats_port);
      core_->stats_port = core_->config.stats_port;
    }
    core_->stats_thread =
        std::thread([core] { core->stats_server.listen_after_bind(); });
    core_->stats_server.wait_until_ready();
  }
}

void Router::stop() {
  std::vector<std::shared_ptr<detail::Connection>> conns;
  {
    std::lock_guard lock(core_->mutex);
    if (!core_->running) return;
    core_->running = false;
    conns = core_->connections;
    for (const auto& conn : conns) detail::evict(*core_, *conn);
    core_->listener.close();
  }
  if (core_->acceptor.joinable()) core_->acceptor.join();
  for (const auto& conn : conns) {
    if (conn->reader.joinable()) conn->reader.join();
    if (conn->writer.joinable()) conn->writer.join();
  }
  {
    std::lock_guard lock(core_->mutex);
    core_->connections.clear();
  }
  if (core_->stats_thread.joinable()) {
    core_->stats_server.stop();
    core_->stats_thread.join();
  }
}

std::uint16_t Router::port() const { return core_->listener.port(); }

int Router::stats_port() const {
  std::lock_guard lock(core_->mutex);
  return core_->stats_port;
}

nlohmann::json Router::stats() const {
  std::lock_guard lock(core_->mutex);
  nlohmann::json j;
  j["router"] = {
      {"bind", core_->config.bind_address},
      {"queue_depth", core_->config.queue_depth},
      {"drop_policy", alga::to_string(core_->config.drop_policy)},
      {"connections", core_->connections.size()},
      {"malformed", core_->malformed},
  };

  auto nodes = nlohmann::json::array();
  for (const auto& conn : core_->connections) {
    if (conn->open) nodes.push_back(conn->name);
  }
  j["nodes"] = std::move(nodes);

  std::set<std::string> topic_names;
  for (const auto& [topic, _] : core_->counters) topic_names.insert(topic);
  for (const auto& [topic, _] : core_->subs_by_topic) topic_names.insert(topic);
  for (const auto& conn : core_->connections) {
    if (!conn->open) continue;
    topic_names.insert(conn->advertised.begin(), conn->advertised.end());
  }

  auto topics = nlohmann::json::object();
  for (const auto& name : topic_names) {
    auto publishers = nlohmann::json::array();
    auto subscribers = nlohmann::json::array();
    for (const auto& conn : core_->connections) {
      if (!conn->open) continue;
      if (conn->advertised.count(name)) publishers.push_back(conn->name);
      if (conn->subscribed.count(name)) subscribers.push_back(conn->name);
    }
    detail::TopicCounters counters;
    if (const auto it = core_->counters.find(name); it != core_->counters.end()) {
      counters = it->second;
    }
    topics[name] = {
        {"publishers", std::move(publishers)},
        {"subscribers", std::move(subscribers)},
        {"packets_in", counters.packets_in},
        {"packets_out", counters.packets_out},
        {"bytes_in", counters.bytes_in},
        {"bytes_out", counters.bytes_out},
        {"dropped", counters.dropped},
    };
  }
  j["topics"] = std::move(topics);
  return j;
}

}  // namespace coral::polyp
