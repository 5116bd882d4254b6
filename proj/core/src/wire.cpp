#include "confassist/wire.hpp"

#include <array>
#include <utility>

namespace confassist {

namespace {

constexpr std::array<std::pair<MessageType, std::string_view>, 10> kTypes{{
    {MessageType::hello, "hello"},
    {MessageType::session_open, "session_open"},
    {MessageType::session_join, "session_join"},
    {MessageType::user_utterance, "user_utterance"},
    {MessageType::bot_response, "bot_response"},
    {MessageType::identify, "identify"},
    {MessageType::consent, "consent"},
    {MessageType::error, "error"},
    {MessageType::ping, "ping"},
    {MessageType::pong, "pong"},
}};

}  // namespace

std::string_view to_string(MessageType type) {
  for (const auto& [t, name] : kTypes) {
    if (t == type) return name;
  }
  return "error";
}

std::optional<MessageType> message_type_from_string(std::string_view name) {
  for (const auto& [t, n] : kTypes) {
    if (n == name) return t;
  }
  return std::nullopt;
}

nlohmann::json to_json(const WireMessage& m) {
  return {{"v", m.v},
          {"type", to_string(m.type)},
          {"session", m.session},
          {"seq", m.seq},
          {"payload", m.payload}};
}

std::string serialize(const WireMessage& message) { return to_json(message).dump(); }

WireMessage parse_wire(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw WireError(wire_error::kMalformed, "frame is not valid JSON");
  }
  if (!j.is_object()) throw WireError(wire_error::kMalformed, "frame must be a JSON object");
  if (!j.contains("v") || !j.at("v").is_number_integer()) {
    throw WireError(wire_error::kMalformed, "frame needs an integer 'v'");
  }
  WireMessage m;
  m.v = j.at("v").get<int>();
  if (m.v != kProtocolVersion) {
    throw WireError(wire_error::kUnsupportedVersion,
                    "protocol version " + std::to_string(m.v) + " is not supported");
  }
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw WireError(wire_error::kMalformed, "frame needs a string 'type'");
  }
  const auto type_name = j.at("type").get<std::string>();
  const auto type = message_type_from_string(type_name);
  if (!type) throw WireError(wire_error::kUnknownType, "unknown message type '" + type_name + "'");
  m.type = *type;
  if (j.contains("session")) {
    if (!j.at("session").is_string()) {
      throw WireError(wire_error::kMalformed, "'session' must be a string");
    }
    m.session = j.at("session").get<std::string>();
  }
  if (j.contains("seq")) {
    if (!j.at("seq").is_number_integer()) {
      throw WireError(wire_error::kMalformed, "'seq' must be an integer");
    }
    m.seq = j.at("seq").get<std::int64_t>();
  }
  if (j.contains("payload")) {
    if (!j.at("payload").is_object()) {
      throw WireError(wire_error::kMalformed, "'payload' must be an object");
    }
    m.payload = j.at("payload");
  }
  return m;
}

WireMessage error_message(const WireError& error, const std::string& session) {
  WireMessage m;
  m.type = MessageType::error;
  m.session = session;
  m.payload = {{"code", error.code()}, {"message", error.what()}};
  if (error.retry_after_ms()) m.payload["retry_after_ms"] = *error.retry_after_ms();
  return m;
}

}  // namespace confassist
