#ifndef CORAL_NET_TCP_HPP_
#define CORAL_NET_TCP_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "coral/errors.hpp"

namespace coral::net {

struct BadAddress final : Error {
  using Error::Error;
};
struct ConnectionRefused final : Error {
  using Error::Error;
};
struct Timeout final : Error {
  using Error::Error;
};
struct Disconnected final : Error {
  using Error::Error;
};
struct SocketError final : Error {
  using Error::Error;
};

// "host:port" -> (host, port). Throws BadAddress.
std::pair<std::string, std::uint16_t> split_host_port(const std::string& address);

// Thin RAII wrapper over a connected TCP socket (blocking mode, TCP_NODELAY).
// Full duplex: one thread may send while another receives.
class TcpSocket {
 public:
  TcpSocket() = default;
  explicit TcpSocket(int fd) : fd_(fd) {}
  ~TcpSocket();
  TcpSocket(TcpSocket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  TcpSocket& operator=(TcpSocket&& other) noexcept;
  TcpSocket(const TcpSocket&) = delete;
  TcpSocket& operator=(const TcpSocket&) = delete;

  // Dials host:port, retrying until the deadline so a peer that comes up a
  // moment later is still reached. After the deadline the last refusal is
  // reported as ConnectionRefused, anything else as Timeout.
  static TcpSocket connect(const std::string& address,
                           std::chrono::milliseconds timeout);

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }

  // Blocks until all bytes are written. Throws Disconnected when the peer
  // is gone.
  void send_all(std::span<const std::uint8_t> bytes);

  // Blocks for one chunk. Returns 0 when the peer closed (reset counts as
  // closed); throws SocketError on anything unexpected.
  std::size_t recv_some(std::uint8_t* data, std::size_t capacity);

  // True when a recv would not block within timeout_ms.
  bool wait_readable(int timeout_ms) const;

  // Unblocks any thread stuck in send/recv on this socket.
  void shutdown() noexcept;
  void close() noexcept;

 private:
  int fd_ = -1;
};

class TcpListener {
 public:
  TcpListener() = default;
  ~TcpListener();
  TcpListener(TcpListener&& other) noexcept
      : fd_(std::exchange(other.fd_, -1)), port_(other.port_) {}
  TcpListener& operator=(TcpListener&& other) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Binds and listens. Port 0 picks an ephemeral port; port() reports the
  // actual one.
  static TcpListener bind(const std::string& address);

  bool valid() const { return fd_ >= 0; }
  std::uint16_t port() const { return port_; }

  // Waits up to timeout_ms for a connection; nullopt on timeout or once the
  // listener is closed.
  std::optional<TcpSocket> accept(int timeout_ms);

  void close() noexcept;

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace coral::net

#endif  // CORAL_NET_TCP_HPP_
