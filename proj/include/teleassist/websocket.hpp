#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "teleassist/session.hpp"

namespace teleassist::ws {

/// One received WebSocket message: a text message or the peer's close.
struct Message {
  enum class Kind { Text, Close } kind = Kind::Text;
  std::string text;
  CloseRequest close;
};

/// Blocking client, used by tests and smoke checks.
class Client {
 public:
  Client();
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  /// Throws std::runtime_error when the connection or handshake fails.
  void connect(const std::string& host, std::uint16_t port, const std::string& path = "/");
  void send_text(std::string_view text);
  /// Next text message or close, or nothing on timeout.
  std::optional<Message> receive(std::chrono::milliseconds timeout);
  void close();
  bool is_open() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ServerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
};

/// Long-running session endpoint. One client at a time drives the session;
/// the sim steps in real time only while a client is connected, so a
/// disconnect pauses the session and a reconnect resumes it.
///
/// Threads: one runs all socket I/O, one runs the fixed-step sim loop. They
/// share the inbox, the latest unsent state and the pending events under a
/// mutex. When the client is slow, unsent states are superseded by newer
/// ones but their events are carried forward, so events are never dropped.
class SessionServer {
 public:
  SessionServer(Session session, ServerOptions options);
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Binds and starts serving; returns the bound port.
  std::uint16_t start();
  void stop();
  /// Blocks until stop() is called.
  void wait();

  /// Number of sim steps run so far (for tests).
  std::uint64_t steps() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace teleassist::ws
