#pragma once

// WebSocket front end for sessions. Each accepted connection on `path`
// gets its own Session, driven in real time on its own strand; nothing
// mutable is shared between sessions.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "mrdial/config.hpp"

namespace mrdial::net {

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 8765;  ///< 0 picks a free port
  std::string path = "/session";
  int threads = 1;
  bool handle_signals = false;  ///< stop on SIGINT/SIGTERM
};

/// "HOST:PORT" -> (host, port). Throws ConfigError on malformed input.
std::pair<std::string, std::uint16_t> parse_addr(std::string_view addr);

class WsServer {
public:
  WsServer(Config config, ServerOptions options);
  ~WsServer();
  WsServer(const WsServer&) = delete;
  WsServer& operator=(const WsServer&) = delete;

  /// Binds and starts the I/O threads. Returns the bound port.
  std::uint16_t start();
  /// Closes the listener and all sessions, then joins the I/O threads.
  void stop();
  /// Blocks until stop() is called or a handled signal arrives.
  void wait();

  std::size_t active_sessions() const;
  std::size_t total_sessions() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace mrdial::net
