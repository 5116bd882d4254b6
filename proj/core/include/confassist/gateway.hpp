#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "confassist/assistant.hpp"
#include "confassist/session.hpp"
#include "confassist/wire.hpp"

namespace confassist {

using ConnectionId = std::uint64_t;

// One live socket as seen by the gateway.
class Connection {
 public:
  virtual ~Connection() = default;
  // Called while the session is locked; must not call back into the
  // gateway. Failures are the transport's business.
  virtual void send(const WireMessage& message) = 0;
};

struct GatewayOptions {
  std::size_t capacity = 1000;
  std::chrono::seconds session_ttl{1800};
  std::chrono::milliseconds retry_after{5000};
  bool rest_rich_cards = false;
  Clock clock = system_now;
  // Random 32-hex-digit tokens when empty.
  IdGenerator group_tokens;
};

struct RestReply {
  std::string session;
  std::optional<std::string> group_token;  // set when this call opened the session
  nlohmann::json responses = nlohmann::json::array();
};

// Routes wire messages and REST calls to the dialogue engine, keeps device
// groups in sync and renders responses per channel. Each session is locked
// for the whole of a turn, so group members never see two turns interleave.
class Gateway {
 public:
  Gateway(Assistant& assistant, GatewayOptions options);
  ~Gateway();

  ConnectionId attach(std::shared_ptr<Connection> connection);
  void detach(ConnectionId id);

  // Parses and routes one text frame; errors go back to the sender as
  // "error" frames and never close the connection.
  void on_frame(ConnectionId id, std::string_view frame);
  void on_message(ConnectionId id, const WireMessage& message);

  // POST /api/message. Throws WireError (UNKNOWN_SESSION, CAPACITY,
  // MALFORMED).
  RestReply post_message(const std::optional<std::string>& session, const nlohmann::json& text);

  std::optional<std::vector<LogRecord>> transcript(const std::string& session_id) const;
  nlohmann::json health() const;
  std::size_t session_count() const;
  // Drops sessions without members that have been idle longer than the TTL.
  std::size_t expire_idle();

  ChannelDescriptor channel_for(ChannelKind kind) const;

 private:
  struct SessionEntry;
  struct ConnState;

  std::shared_ptr<SessionEntry> open_session(ChannelDescriptor channel);
  std::shared_ptr<SessionEntry> find_session(const std::string& id) const;
  void handle(ConnectionId id, const WireMessage& message);
  void broadcast(SessionEntry& entry, const std::vector<Response>& responses);
  WireMessage bot_frame(const SessionEntry& entry, std::int64_t seq, int turn,
                        const Response& response, const Capabilities& caps) const;
  ChannelDescriptor channel_from(const nlohmann::json& payload,
                                 const std::optional<ChannelDescriptor>& fallback) const;

  Assistant& assistant_;
  GatewayOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
  std::map<std::string, std::string> groups_;  // token -> session id
  std::map<ConnectionId, std::shared_ptr<ConnState>> connections_;
  ConnectionId next_connection_ = 1;
};

}  // namespace confassist
