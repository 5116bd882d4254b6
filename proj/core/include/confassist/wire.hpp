#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace confassist {

inline constexpr int kProtocolVersion = 1;

enum class MessageType {
  hello,
  session_open,
  session_join,
  user_utterance,
  bot_response,
  identify,
  consent,
  error,
  ping,
  pong
};

std::string_view to_string(MessageType type);
std::optional<MessageType> message_type_from_string(std::string_view name);

// Error codes carried in "error" frames and REST error bodies.
namespace wire_error {
inline constexpr std::string_view kMalformed = "MALFORMED";
inline constexpr std::string_view kUnsupportedVersion = "UNSUPPORTED_VERSION";
inline constexpr std::string_view kUnknownType = "UNKNOWN_TYPE";
inline constexpr std::string_view kUnknownSession = "UNKNOWN_SESSION";
inline constexpr std::string_view kUnknownGroup = "UNKNOWN_GROUP";
inline constexpr std::string_view kGroupFull = "GROUP_FULL";
inline constexpr std::string_view kCapacity = "CAPACITY";
inline constexpr std::string_view kOutOfOrder = "OUT_OF_ORDER";
inline constexpr std::string_view kProtocol = "PROTOCOL";
inline constexpr std::string_view kReadOnly = "READ_ONLY";
inline constexpr std::string_view kInternal = "INTERNAL";
}  // namespace wire_error

// {"v": 1, "type": ..., "session": ..., "seq": ..., "payload": {...}}
struct WireMessage {
  int v = kProtocolVersion;
  MessageType type = MessageType::ping;
  std::string session;
  std::int64_t seq = 0;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const WireMessage&) const = default;
};

class WireError : public std::runtime_error {
 public:
  WireError(std::string_view code, const std::string& message,
            std::optional<std::int64_t> retry_after_ms = std::nullopt)
      : std::runtime_error(message), code_(code), retry_after_ms_(retry_after_ms) {}

  const std::string& code() const { return code_; }
  std::optional<std::int64_t> retry_after_ms() const { return retry_after_ms_; }

 private:
  std::string code_;
  std::optional<std::int64_t> retry_after_ms_;
};

nlohmann::json to_json(const WireMessage& message);
std::string serialize(const WireMessage& message);

// Throws WireError with MALFORMED, UNSUPPORTED_VERSION or UNKNOWN_TYPE.
WireMessage parse_wire(std::string_view text);

WireMessage error_message(const WireError& error, const std::string& session = {});

}  // namespace confassist
