#include "coral/net/tcp.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

namespace coral::net {

namespace {

[[noreturn]] void throw_errno(const char* what) {
  throw SocketError(std::string(what) + ": " + std::strerror(errno));
}

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) freeaddrinfo(head);
  }
};

AddrInfo resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = passive ? AI_PASSIVE : 0;
  AddrInfo out;
  const int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(),
                             std::to_string(port).c_str(), &hints, &out.head);
  if (rc != 0) {
    throw BadAddress("cannot resolve \"" + host + "\": " + gai_strerror(rc));
  }
  return out;
}

void set_nodelay(int fd) {
  const int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

std::pair<std::string, std::uint16_t> split_host_port(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw BadAddress("expected host:port, got \"" + address + '"');
  }
  const std::string host = address.substr(0, colon);
  const std::string port_str = address.substr(colon + 1);
  std::size_t used = 0;
  unsigned long port = 0;
  try {
    port = std::stoul(port_str, &used);
  } catch (const std::exception&) {
    throw BadAddress("bad port in \"" + address + '"');
  }
  if (used != port_str.size() || port > 65535) {
    throw BadAddress("bad port in \"" + address + '"');
  }
  return {host, static_cast<std::uint16_t>(port)};
}

TcpSocket::~TcpSocket() { close(); }

TcpSocket& TcpSocket::operator=(TcpSocket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

TcpSocket TcpSocket::connect(const std::string& address,
                             std::chrono::milliseconds timeout) {
  const auto [host, port] = split_host_port(address);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  int last_errno = 0;

  do {
    const AddrInfo addrs = resolve(host, port, /*passive=*/false);
    for (const addrinfo* ai = addrs.head; ai; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) {
        last_errno = errno;
        continue;
      }
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        set_nodelay(fd);
        return TcpSocket(fd);
      }
      last_errno = errno;
      ::close(fd);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(25));
  } while (std::chrono::steady_clock::now() < deadline);

  if (last_errno == ECONNREFUSED) {
    throw ConnectionRefused("connection to " + address + " refused");
  }
  throw Timeout("connecting to " + address + " timed out: " +
                std::strerror(last_errno));
}

void TcpSocket::send_all(std::span<const std::uint8_t> bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    const ssize_t n =
        ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n > 0) {
      off += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EPIPE || errno == ECONNRESET || errno == EBADF ||
                  errno == ENOTCONN)) {
      throw Disconnected("peer went away during send");
    }
    throw_errno("send");
  }
}

std::size_t TcpSocket::recv_some(std::uint8_t* data, std::size_t capacity) {
  while (true) {
    const ssize_t n = ::recv(fd_, data, capacity, 0);
    if (n > 0) return static_cast<std::size_t>(n);
    if (n == 0) return 0;
    if (errno == EINTR) continue;
    if (errno == ECONNRESET || errno == EBADF || errno == ENOTCONN) return 0;
    throw_errno("recv");
  }
}

bool TcpSocket::wait_readable(int timeout_ms) const {
  pollfd pfd{fd_, POLLIN, 0};
  const int rc = ::poll(&pfd, 1, timeout_ms);
  return rc > 0 && (pfd.revents & (POLLIN | POLLHUP | POLLERR)) != 0;
}

void TcpSocket::shutdown() noexcept {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void TcpSocket::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpListener::~TcpListener() { close(); }

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
    port_ = other.port_;
  }
  return *this;
}

TcpListener TcpListener::bind(const std::string& address) {
  const auto [host, port] = split_host_port(address);
  const AddrInfo addrs = resolve(host, port, /*passive=*/true);

  int last_errno = 0;
  for (const addrinfo* ai = addrs.head; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_errno = errno;
      continue;
    }
    const int one = 1;
    setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) != 0 || ::listen(fd, 64) != 0) {
      last_errno = errno;
      ::close(fd);
      continue;
    }

    sockaddr_storage bound{};
    socklen_t len = sizeof(bound);
    if (getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len) != 0) {
      last_errno = errno;
      ::close(fd);
      continue;
    }
    TcpListener listener;
    listener.fd_ = fd;
    listener.port_ =
        bound.ss_family == AF_INET6
            ? ntohs(reinterpret_cast<sockaddr_in6&>(bound).sin6_port)
            : ntohs(reinterpret_cast<sockaddr_in&>(bound).sin_port);
    return listener;
  }
  throw SocketError("cannot listen on " + address + ": " +
                    std::strerror(last_errno));
}

std::optional<TcpSocket> TcpListener::accept(int timeout_ms) {
  if (fd_ < 0) return std::nullopt;
  pollfd pfd{fd_, POLLIN, 0};
  const int rc = ::poll(&pfd, 1, timeout_ms);
  if (rc <= 0 || (pfd.revents & POLLIN) == 0) return std::nullopt;
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  set_nodelay(fd);
  return TcpSocket(fd);
}

void TcpListener::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace coral::net
