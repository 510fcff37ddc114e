#include "hiot/socket_transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <system_error>

#include "hiot/wire.hpp"

namespace hiot {

namespace {

[[noreturn]] void throw_errno(const char* what) {
  throw std::system_error(errno, std::generic_category(), what);
}

bool write_all(int fd, const uint8_t* data, size_t len) {
  size_t off = 0;
  while (off < len) {
    ssize_t n = ::send(fd, data + off, len - off, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return false;
    }
    off += size_t(n);
  }
  return true;
}

bool read_all(int fd, uint8_t* data, size_t len) {
  size_t off = 0;
  while (off < len) {
    ssize_t n = ::recv(fd, data + off, len - off, 0);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return false;
    }
    off += size_t(n);
  }
  return true;
}

sockaddr_in make_addr(const std::string& host, uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw std::system_error(EINVAL, std::generic_category(),
                            "address must be IPv4 dotted-quad");
  return addr;
}

}  // namespace

bool write_frame(int fd, std::span<const uint8_t> payload) {
  if (payload.size() > kMaxFrame) return false;
  uint8_t hdr[4] = {uint8_t(payload.size() >> 24), uint8_t(payload.size() >> 16),
                    uint8_t(payload.size() >> 8), uint8_t(payload.size())};
  return write_all(fd, hdr, 4) && write_all(fd, payload.data(), payload.size());
}

std::optional<Bytes> read_frame(int fd) {
  uint8_t hdr[4];
  if (!read_all(fd, hdr, 4)) return std::nullopt;
  uint32_t len = get_u32_be(hdr);
  if (len > kMaxFrame) return std::nullopt;  // oversize: caller closes
  Bytes payload(len);
  if (len && !read_all(fd, payload.data(), len)) return std::nullopt;
  return payload;
}

TcpServer::~TcpServer() { stop(); }

uint16_t TcpServer::listen(const std::string& host, uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw_errno("socket");
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  sockaddr_in addr = make_addr(host, port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0)
    throw_errno("bind");
  if (::listen(listen_fd_, 16) < 0) throw_errno("listen");
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  return port_;
}

void TcpServer::serve_async(FrameHandler handler) {
  handler_ = std::move(handler);
  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void TcpServer::accept_loop() {
  while (running_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (running_ && errno == EINTR) continue;
      break;
    }
    workers_.emplace_back([this, fd] {
      while (true) {
        auto frame = read_frame(fd);
        if (!frame) break;  // close, error or oversize
        for (const Bytes& reply : handler_(*frame)) {
          if (!write_frame(fd, reply)) break;
        }
      }
      ::close(fd);
    });
  }
}

void TcpServer::stop() {
  if (!running_ && listen_fd_ < 0) return;
  running_ = false;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  for (auto& w : workers_)
    if (w.joinable()) w.join();
  workers_.clear();
}

TcpClient::~TcpClient() { close(); }

void TcpClient::connect(const std::string& host, uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw_errno("socket");
  sockaddr_in addr = make_addr(host, port);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    int saved = errno;
    ::close(fd_);
    fd_ = -1;
    throw std::system_error(saved, std::generic_category(), "connect");
  }
  int yes = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof(yes));
}

void TcpClient::send(std::span<const uint8_t> frame) {
  if (fd_ < 0) throw std::logic_error("client not connected");
  if (frame.size() > kMaxFrame)
    throw std::length_error("frame exceeds the 64 KiB limit");
  if (!write_frame(fd_, frame)) throw_errno("send");
}

std::optional<Bytes> TcpClient::recv() {
  if (fd_ < 0) throw std::logic_error("client not connected");
  return read_frame(fd_);
}

void TcpClient::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace hiot
