#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "confassist/gateway.hpp"

namespace confassist {

struct ServerOptions {
  std::string host = "0.0.0.0";
  std::uint16_t port = 8080;  // 0 picks a free port
  // Served under /chat; the route answers 404 when unset or missing.
  std::filesystem::path static_dir;
  // Required in X-Admin-Token for transcript reads; empty disables them.
  std::string admin_token;
  std::chrono::seconds sweep_interval{60};
  std::size_t body_limit = 64 * 1024;
};

// HTTP + WebSocket front end for a Gateway. All sockets are served by one
// io thread; the gateway does the per-session serialization.
//
//   POST /api/message                   {session?, text}
//   GET  /api/health
//   GET  /api/sessions/{id}/transcript  X-Admin-Token
//   GET  /ws                            WireMessage frames
//   GET  /chat/...                      static bundle
class Server {
 public:
  Server(Gateway& gateway, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving on a background thread. Throws on bind errors.
  void start();
  // Closes every socket and joins the io thread. Idempotent.
  void stop();
  // Blocks until stop() is called from elsewhere or the io thread exits.
  void wait();

  std::uint16_t port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace confassist
