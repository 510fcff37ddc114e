#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hiot/bytes.hpp"

namespace hiot {

// One logical message per frame: 4-byte big-endian length, then payload.
// Frames above kMaxFrame are refused and the connection is closed.

bool write_frame(int fd, std::span<const uint8_t> payload);
std::optional<Bytes> read_frame(int fd);

// Per-frame handler; returned frames are written back in order.
using FrameHandler = std::function<std::vector<Bytes>(const Bytes&)>;

class TcpServer {
 public:
  TcpServer() = default;
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  // Binds and listens; port 0 picks an ephemeral port. Throws
  // std::system_error on bind/listen failure.
  uint16_t listen(const std::string& host, uint16_t port);
  // Accept loop on a background thread; connections are handled one
  // thread each, frames within a connection in order.
  void serve_async(FrameHandler handler);
  void stop();

  uint16_t port() const { return port_; }

 private:
  void accept_loop();

  int listen_fd_ = -1;
  uint16_t port_ = 0;
  FrameHandler handler_;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::vector<std::thread> workers_;
};

class TcpClient {
 public:
  TcpClient() = default;
  ~TcpClient();
  TcpClient(const TcpClient&) = delete;
  TcpClient& operator=(const TcpClient&) = delete;

  // Throws std::system_error on resolve/connect failure.
  void connect(const std::string& host, uint16_t port);
  void send(std::span<const uint8_t> frame);
  // Blocks for one frame; nullopt on orderly close.
  std::optional<Bytes> recv();
  void close();

 private:
  int fd_ = -1;
};

}  // namespace hiot
