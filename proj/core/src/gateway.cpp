#include "confassist/gateway.hpp"

#include <spdlog/spdlog.h>

#include "confassist/channel.hpp"
#include "confassist/error.hpp"
#include "confassist/ids.hpp"

#ifndef CONFASSIST_VERSION
#define CONFASSIST_VERSION "0.0.0"
#endif

namespace confassist {

struct Gateway::SessionEntry {
  SessionEntry(Session s, std::string token, Instant now)
      : session(std::move(s)), group_token(std::move(token)), last_active(now) {}

  std::mutex mutex;
  Session session;
  std::string group_token;
  std::map<ConnectionId, ChannelDescriptor> members;
  std::int64_t out_seq = 0;
  std::map<ChannelKind, std::int64_t> in_seq;
  int replay_turn = -1;
  std::vector<std::pair<std::int64_t, Response>> replay;
  Instant last_active;
};

struct Gateway::ConnState {
  std::shared_ptr<Connection> connection;
  std::optional<ChannelDescriptor> hello_channel;
  std::string session;
};

namespace {

WireMessage control(MessageType type, const std::string& session, nlohmann::json payload) {
  WireMessage m;
  m.type = type;
  m.session = session;
  m.payload = std::move(payload);
  return m;
}

nlohmann::json capabilities_json(const Capabilities& c) {
  return {{"rich_cards", c.rich_cards}, {"display_only", c.display_only}, {"text", c.text}};
}

std::string payload_string(const nlohmann::json& payload, const char* key) {
  if (!payload.contains(key)) return {};
  if (!payload.at(key).is_string()) {
    throw WireError(wire_error::kMalformed, std::string("'") + key + "' must be a string");
  }
  return payload.at(key).get<std::string>();
}

}  // namespace

Gateway::Gateway(Assistant& assistant, GatewayOptions options)
    : assistant_(assistant), options_(std::move(options)) {
  if (!options_.clock) options_.clock = system_now;
  if (!options_.group_tokens) options_.group_tokens = [] { return random_token(16); };
}

Gateway::~Gateway() = default;

ChannelDescriptor Gateway::channel_for(ChannelKind kind) const {
  return ChannelDescriptor::make(kind, options_.rest_rich_cards);
}

ConnectionId Gateway::attach(std::shared_ptr<Connection> connection) {
  std::lock_guard lock(mutex_);
  const ConnectionId id = next_connection_++;
  auto state = std::make_shared<ConnState>();
  state->connection = std::move(connection);
  connections_[id] = std::move(state);
  return id;
}

void Gateway::detach(ConnectionId id) {
  std::shared_ptr<ConnState> state;
  std::shared_ptr<SessionEntry> entry;
  {
    std::lock_guard lock(mutex_);
    const auto it = connections_.find(id);
    if (it == connections_.end()) return;
    state = it->second;
    connections_.erase(it);
    if (const auto s = sessions_.find(state->session); s != sessions_.end()) entry = s->second;
  }
  if (entry) {
    std::lock_guard lock(entry->mutex);
    entry->members.erase(id);
    entry->last_active = options_.clock();
  }
}

std::shared_ptr<Gateway::SessionEntry> Gateway::find_session(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t Gateway::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::size_t Gateway::expire_idle() {
  const Instant now = options_.clock();
  std::vector<std::shared_ptr<SessionEntry>> candidates;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, entry] : sessions_) candidates.push_back(entry);
  }
  std::vector<std::pair<std::string, std::string>> expired;
  for (const auto& entry : candidates) {
    std::lock_guard lock(entry->mutex);
    if (entry->members.empty() && now - entry->last_active > options_.session_ttl) {
      expired.emplace_back(entry->session.id(), entry->group_token);
    }
  }
  std::lock_guard lock(mutex_);
  for (const auto& [id, token] : expired) {
    sessions_.erase(id);
    groups_.erase(token);
  }
  return expired.size();
}

std::shared_ptr<Gateway::SessionEntry> Gateway::open_session(ChannelDescriptor channel) {
  if (session_count() >= options_.capacity) expire_idle();
  std::lock_guard lock(mutex_);
  if (sessions_.size() >= options_.capacity) {
    throw WireError(wire_error::kCapacity, "the assistant is busy; try again shortly",
                    options_.retry_after.count());
  }
  auto session = assistant_.engine().new_session(channel);
  auto token = options_.group_tokens();
  while (groups_.count(token)) token = options_.group_tokens();
  auto entry = std::make_shared<SessionEntry>(std::move(session), token, options_.clock());
  groups_[token] = entry->session.id();
  sessions_[entry->session.id()] = entry;
  return entry;
}

ChannelDescriptor Gateway::channel_from(const nlohmann::json& payload,
                                        const std::optional<ChannelDescriptor>& fallback) const {
  const auto name = payload_string(payload, "channel");
  if (name.empty()) return fallback.value_or(channel_for(ChannelKind::webchat));
  try {
    return channel_for(channel_kind_from_string(name));
  } catch (const Error&) {
    throw WireError(wire_error::kMalformed, "unknown channel kind '" + name + "'");
  }
}

WireMessage Gateway::bot_frame(const SessionEntry& entry, std::int64_t seq, int turn,
                               const Response& response, const Capabilities& caps) const {
  WireMessage m;
  m.type = MessageType::bot_response;
  m.session = entry.session.id();
  m.seq = seq;
  m.payload = {{"turn", turn},
               {"skill", response.skill},
               {"content", to_json(render_for_channel(response.payload, caps))}};
  return m;
}

void Gateway::broadcast(SessionEntry& entry, const std::vector<Response>& responses) {
  const int turn = entry.session.turn_count();
  if (entry.replay_turn != turn) {
    entry.replay.clear();
    entry.replay_turn = turn;
  }
  std::vector<std::shared_ptr<Connection>> targets;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, channel] : entry.members) {
      if (const auto it = connections_.find(id); it != connections_.end()) {
        targets.push_back(it->second->connection);
      } else {
        targets.push_back(nullptr);
      }
    }
  }
  for (const auto& response : responses) {
    const std::int64_t seq = ++entry.out_seq;
    entry.replay.emplace_back(seq, response);
    std::size_t i = 0;
    for (const auto& [id, channel] : entry.members) {
      const auto& target = targets[i++];
      if (!target) continue;
      try {
        target->send(bot_frame(entry, seq, turn, response, channel.capabilities));
      } catch (const std::exception& e) {
        spdlog::warn("send to connection {} failed: {}", id, e.what());
      }
    }
  }
}

void Gateway::on_frame(ConnectionId id, std::string_view frame) {
  WireMessage message;
  try {
    message = parse_wire(frame);
  } catch (const WireError& e) {
    std::shared_ptr<ConnState> state;
    {
      std::lock_guard lock(mutex_);
      if (const auto it = connections_.find(id); it != connections_.end()) state = it->second;
    }
    if (state) state->connection->send(error_message(e, state->session));
    return;
  }
  on_message(id, message);
}

void Gateway::on_message(ConnectionId id, const WireMessage& message) {
  std::shared_ptr<ConnState> state;
  {
    std::lock_guard lock(mutex_);
    const auto it = connections_.find(id);
    if (it == connections_.end()) return;
    state = it->second;
  }
  try {
    handle(id, message);
  } catch (const WireError& e) {
    state->connection->send(error_message(e, state->session));
  } catch (const Error& e) {
    const auto code =
        e.code() == ErrorCode::protocol ? wire_error::kProtocol : wire_error::kInternal;
    state->connection->send(error_message(WireError(code, e.what()), state->session));
  } catch (const std::exception& e) {
    spdlog::error("connection {}: {}", id, e.what());
    state->connection->send(
        error_message(WireError(wire_error::kInternal, "internal error"), state->session));
  }
}

void Gateway::handle(ConnectionId id, const WireMessage& message) {
  std::shared_ptr<ConnState> state;
  {
    std::lock_guard lock(mutex_);
    state = connections_.at(id);
  }
  const auto& conn = state->connection;

  switch (message.type) {
    case MessageType::hello: {
      state->hello_channel = channel_from(message.payload, std::nullopt);
      conn->send(control(MessageType::hello, state->session,
                         {{"version", kProtocolVersion}, {"server", CONFASSIST_VERSION}}));
      return;
    }
    case MessageType::ping:
      conn->send(control(MessageType::pong, state->session, message.payload));
      return;
    case MessageType::session_open: {
      const auto channel = channel_from(message.payload, state->hello_channel);
      if (channel.capabilities.display_only) {
        throw WireError(wire_error::kReadOnly, "display-only channels join existing sessions");
      }
      if (!state->session.empty()) {
        if (auto old = find_session(state->session)) {
          std::lock_guard lock(old->mutex);
          old->members.erase(id);
        }
      }
      auto entry = open_session(channel);
      std::lock_guard lock(entry->mutex);
      entry->members[id] = channel;
      state->session = entry->session.id();
      conn->send(control(MessageType::session_open, entry->session.id(),
                         {{"session", entry->session.id()},
                          {"group_token", entry->group_token},
                          {"channel", to_string(channel.kind)},
                          {"capabilities", capabilities_json(channel.capabilities)}}));
      return;
    }
    case MessageType::session_join: {
      const auto token = payload_string(message.payload, "group_token");
      const auto channel = channel_from(message.payload, state->hello_channel);
      std::shared_ptr<SessionEntry> entry;
      {
        std::lock_guard lock(mutex_);
        if (const auto it = groups_.find(token); it != groups_.end()) {
          entry = sessions_.at(it->second);
        }
      }
      if (!entry) throw WireError(wire_error::kUnknownGroup, "unknown or expired group token");
      if (!state->session.empty() && state->session != entry->session.id()) {
        if (auto old = find_session(state->session)) {
          std::lock_guard lock(old->mutex);
          old->members.erase(id);
        }
      }
      std::lock_guard lock(entry->mutex);
      for (const auto& [member, c] : entry->members) {
        if (member != id && c.kind == channel.kind) {
          throw WireError(wire_error::kGroupFull, "the group already has a " +
                                                      std::string(to_string(channel.kind)));
        }
      }
      entry->members[id] = channel;
      entry->last_active = options_.clock();
      state->session = entry->session.id();
      std::vector<ChannelDescriptor> members;
      for (const auto& [member, c] : entry->members) members.push_back(c);
      conn->send(control(MessageType::session_join, entry->session.id(),
                         {{"session", entry->session.id()},
                          {"group_token", entry->group_token},
                          {"channel", to_string(channel.kind)},
                          {"capabilities", capabilities_json(channel.capabilities)},
                          {"rich_display", group_has_rich_display(members)}}));
      for (const auto& [seq, response] : entry->replay) {
        conn->send(bot_frame(*entry, seq, entry->replay_turn, response, channel.capabilities));
      }
      return;
    }
    case MessageType::user_utterance:
    case MessageType::identify:
    case MessageType::consent: {
      if (state->session.empty()) {
        throw WireError(wire_error::kProtocol, "open or join a session first");
      }
      if (!message.session.empty() && message.session != state->session) {
        throw WireError(wire_error::kUnknownSession,
                        "connection is not a member of session '" + message.session + "'");
      }
      auto entry = find_session(state->session);
      if (!entry) throw WireError(wire_error::kUnknownSession, "session has expired");
      std::lock_guard lock(entry->mutex);
      const auto member = entry->members.find(id);
      if (member == entry->members.end()) {
        throw WireError(wire_error::kUnknownSession, "connection left the session");
      }
      if (member->second.capabilities.display_only) {
        throw WireError(wire_error::kReadOnly, "display-only channels cannot send input");
      }
      auto& last_seq = entry->in_seq[member->second.kind];
      if (message.seq <= last_seq) {
        throw WireError(wire_error::kOutOfOrder, "seq " + std::to_string(message.seq) +
                                                     " is not after " + std::to_string(last_seq));
      }
      last_seq = message.seq;
      entry->last_active = options_.clock();
      const auto& engine = assistant_.engine();
      std::vector<Response> responses;
      if (message.type == MessageType::user_utterance) {
        if (!message.payload.contains("text") || !message.payload.at("text").is_string()) {
          throw WireError(wire_error::kMalformed, "user_utterance needs a string 'text'");
        }
        responses = engine.handle_message(entry->session,
                                          message.payload.at("text").get<std::string>(),
                                          options_.clock());
      } else {
        const char* op = message.type == MessageType::identify ? "identify" : "consent";
        responses = engine.run_operation(entry->session, std::string(kCoreSkill), op,
                                         message.payload, options_.clock());
      }
      broadcast(*entry, responses);
      return;
    }
    case MessageType::bot_response:
    case MessageType::error:
    case MessageType::pong:
      throw WireError(wire_error::kProtocol,
                      "'" + std::string(to_string(message.type)) + "' is sent by the server only");
  }
}

RestReply Gateway::post_message(const std::optional<std::string>& session,
                                const nlohmann::json& text) {
  if (!text.is_string()) throw WireError(wire_error::kMalformed, "'text' must be a string");
  RestReply reply;
  std::shared_ptr<SessionEntry> entry;
  if (session) {
    entry = find_session(*session);
    if (!entry) throw WireError(wire_error::kUnknownSession, "unknown session '" + *session + "'");
  } else {
    entry = open_session(channel_for(ChannelKind::rest));
    reply.group_token = entry->group_token;
  }
  std::lock_guard lock(entry->mutex);
  entry->last_active = options_.clock();
  const auto responses =
      assistant_.engine().handle_message(entry->session, text.get<std::string>(), options_.clock());
  broadcast(*entry, responses);
  const auto caps = channel_for(ChannelKind::rest).capabilities;
  reply.session = entry->session.id();
  for (const auto& r : responses) {
    reply.responses.push_back(
        {{"skill", r.skill}, {"content", to_json(render_for_channel(r.payload, caps))}});
  }
  return reply;
}

std::optional<std::vector<LogRecord>> Gateway::transcript(const std::string& session_id) const {
  auto records = assistant_.logs().transcript(session_id);
  if (records.empty() && !find_session(session_id)) return std::nullopt;
  return records;
}

nlohmann::json Gateway::health() const {
  const auto failures = assistant_.logs().failure_count();
  return {{"status", failures == 0 ? "ok" : "degraded"},
          {"version", CONFASSIST_VERSION},
          {"sessions", session_count()},
          {"log_failures", failures}};
}

}  // namespace confassist
