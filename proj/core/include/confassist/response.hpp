#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace confassist {

struct TextPayload {
  std::string text;
  bool operator==(const TextPayload&) const = default;
};

struct ListCard {
  std::string title;
  std::vector<std::string> entries;
  bool operator==(const ListCard&) const = default;
};

struct MapCard {
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
  std::string map_ref;       // static map image reference
  std::string instructions;  // caption: directions or address
  bool operator==(const MapCard&) const = default;
};

struct ItemCard {
  std::string title;
  std::string subtitle;
  double rating = 0.0;
  std::string price;  // "$".."$$$$"
  std::string body;
  bool operator==(const ItemCard&) const = default;
};

struct QuickReplies {
  std::string prompt;
  std::vector<std::string> options;  // 1..6
  bool operator==(const QuickReplies&) const = default;
};

struct IdentifyRequest {
  std::string reason;
  bool operator==(const IdentifyRequest&) const = default;
};

using ResponsePayload =
    std::variant<TextPayload, ListCard, MapCard, ItemCard, QuickReplies,
                 IdentifyRequest>;

// Throws Error(schema_violation) if a payload breaks its invariants.
void validate(const ResponsePayload& payload);

nlohmann::json to_json(const ResponsePayload& payload);
ResponsePayload payload_from_json(const nlohmann::json& j);

// Lossy, deterministic text form of any payload:
//   Text          -> the text
//   ItemCard      -> title, "4.5★", "$$" and body joined by " \u2014 "
//   MapCard       -> "name at 58.96998,5.73311: instructions"
//   ListCard      -> "title" then "1. entry" lines, newline separated
//   QuickReplies  -> "prompt (option / option)"
//   IdentifyRequest -> the reason
std::string flatten_to_text(const ResponsePayload& payload);

// One unit of bot output together with its provenance.
struct Response {
  ResponsePayload payload;
  std::string skill;        // attribution for analytics, "core" by default
  std::string template_id;  // empty for skill-built payloads

  bool operator==(const Response&) const = default;
};

Response text_response(std::string text, std::string skill,
                       std::string template_id = {});

}  // namespace confassist
