// Copyright 2026 The Ogmios Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Blocking TCP helpers over POSIX sockets.

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "ogmios/distribution/protocol.hpp"
#include "ogmios/errors.hpp"

namespace ogmios::distribution {

class NetworkError : public Error {
 public:
  using Error::Error;
};

struct Address {
  std::string host;
  std::uint16_t port = 0;

  std::string to_string() const { return host + ":" + std::to_string(port); }
};

// Accepts "host:port" or ":port" (all interfaces).
inline Address parse_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw ConfigError("address '" + std::string(text) + "' lacks a port");
  const std::string port(text.substr(colon + 1));
  if (port.empty() || port.size() > 5 || port.find_first_not_of("0123456789") != std::string::npos ||
      std::stoul(port) > 65535) {
    throw ConfigError("bad port in address '" + std::string(text) + "'");
  }
  Address a{std::string(text.substr(0, colon)), static_cast<std::uint16_t>(std::stoul(port))};
  if (a.host.size() >= 2 && a.host.front() == '[' && a.host.back() == ']') a.host = a.host.substr(1, a.host.size() - 2);
  return a;
}

inline std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept {
    if (this != &o) {
      close();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }

  void close() {
    if (fd_ >= 0) ::close(std::exchange(fd_, -1));
  }

  // Wakes up a thread blocked in accept or recv on this socket.
  void shutdown() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  }

  void send_all(std::string_view bytes) {
    while (!bytes.empty()) {
      const ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw NetworkError(errno_text("send"));
      }
      bytes.remove_prefix(static_cast<std::size_t>(n));
    }
  }

  // False on a clean close before any byte was read.
  bool recv_exact(char* buf, std::size_t n) {
    std::size_t got = 0;
    while (got < n) {
      const ssize_t r = ::recv(fd_, buf + got, n - got, 0);
      if (r < 0) {
        if (errno == EINTR) continue;
        throw NetworkError(errno_text("recv"));
      }
      if (r == 0) {
        if (got == 0) return false;
        throw NetworkError("connection closed mid-message");
      }
      got += static_cast<std::size_t>(r);
    }
    return true;
  }

  void send_message(const Message& m) { send_all(encode(m)); }

  std::optional<Message> receive_message() {
    return read_message([this](char* buf, std::size_t n) { return recv_exact(buf, n); });
  }

 private:
  int fd_ = -1;
};

namespace detail {

struct AddrInfo {
  addrinfo* list = nullptr;
  ~AddrInfo() {
    if (list) ::freeaddrinfo(list);
  }
};

inline AddrInfo resolve(const Address& a, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfo info;
  const std::string port = std::to_string(a.port);
  const int rc = ::getaddrinfo(a.host.empty() ? nullptr : a.host.c_str(), port.c_str(), &hints, &info.list);
  if (rc != 0) throw NetworkError("cannot resolve " + a.to_string() + ": " + ::gai_strerror(rc));
  return info;
}

}  // namespace detail

inline Socket connect_to(const Address& a) {
  const auto info = detail::resolve(a, false);
  std::string last = "no addresses";
  for (addrinfo* p = info.list; p; p = p->ai_next) {
    Socket s(::socket(p->ai_family, p->ai_socktype, p->ai_protocol));
    if (!s.valid()) {
      last = errno_text("socket");
      continue;
    }
    if (::connect(s.fd(), p->ai_addr, p->ai_addrlen) == 0) {
      const int one = 1;
      ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return s;
    }
    last = errno_text("connect");
  }
  throw NetworkError("cannot connect to " + a.to_string() + ": " + last);
}

class Listener {
 public:
  explicit Listener(const Address& a) {
    const auto info = detail::resolve(a, true);
    std::string last = "no addresses";
    for (addrinfo* p = info.list; p; p = p->ai_next) {
      Socket s(::socket(p->ai_family, p->ai_socktype, p->ai_protocol));
      if (!s.valid()) {
        last = errno_text("socket");
        continue;
      }
      const int one = 1;
      ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
      if (::bind(s.fd(), p->ai_addr, p->ai_addrlen) == 0 && ::listen(s.fd(), 64) == 0) {
        socket_ = std::move(s);
        break;
      }
      last = errno_text("bind");
    }
    if (!socket_.valid()) throw NetworkError("cannot listen on " + a.to_string() + ": " + last);
  }

  // The bound port, useful when listening on port 0.
  std::uint16_t port() const {
    sockaddr_storage ss{};
    socklen_t len = sizeof ss;
    if (::getsockname(socket_.fd(), reinterpret_cast<sockaddr*>(&ss), &len) != 0) {
      throw NetworkError(errno_text("getsockname"));
    }
    if (ss.ss_family == AF_INET6) return ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port);
    return ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
  }

  // Empty optional once the listener has been shut down.
  std::optional<Socket> accept() {
    for (;;) {
      const int fd = ::accept(socket_.fd(), nullptr, nullptr);
      if (fd >= 0) {
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return Socket(fd);
      }
      if (errno == EINTR || errno == ECONNABORTED) continue;
      return std::nullopt;
    }
  }

  void shutdown() { socket_.shutdown(); }

 private:
  Socket socket_;
};

}  // namespace ogmios::distribution
