#include "confassist/response.hpp"

#include <cstdio>

#include "confassist/error.hpp"

namespace confassist {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool valid_coordinates(double lat, double lon) {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

}  // namespace

void validate(const ResponsePayload& payload) {
  std::visit(
      overloaded{
          [](const TextPayload& p) {
            if (p.text.empty()) {
              throw Error(ErrorCode::schema_violation, "Text payload is empty");
            }
          },
          [](const QuickReplies& p) {
            if (p.options.empty() || p.options.size() > 6) {
              throw Error(ErrorCode::schema_violation,
                          "QuickReplies needs 1-6 options");
            }
          },
          [](const MapCard& p) {
            if (!valid_coordinates(p.lat, p.lon)) {
              throw Error(ErrorCode::schema_violation,
                          "MapCard coordinates out of range");
            }
          },
          [](const auto&) {},
      },
      payload);
}

nlohmann::json to_json(const ResponsePayload& payload) {
  return std::visit(
      overloaded{
          [](const TextPayload& p) {
            return nlohmann::json{{"kind", "text"}, {"text", p.text}};
          },
          [](const ListCard& p) {
            return nlohmann::json{
                {"kind", "list_card"}, {"title", p.title}, {"entries", p.entries}};
          },
          [](const MapCard& p) {
            return nlohmann::json{{"kind", "map_card"},     {"name", p.name},
                                  {"lat", p.lat},           {"lon", p.lon},
                                  {"map_ref", p.map_ref},   {"instructions", p.instructions}};
          },
          [](const ItemCard& p) {
            return nlohmann::json{{"kind", "item_card"},  {"title", p.title},
                                  {"subtitle", p.subtitle}, {"rating", p.rating},
                                  {"price", p.price},     {"body", p.body}};
          },
          [](const QuickReplies& p) {
            return nlohmann::json{
                {"kind", "quick_replies"}, {"prompt", p.prompt}, {"options", p.options}};
          },
          [](const IdentifyRequest& p) {
            return nlohmann::json{{"kind", "identify_request"}, {"reason", p.reason}};
          },
      },
      payload);
}

ResponsePayload payload_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "text") return TextPayload{j.at("text").get<std::string>()};
    if (kind == "list_card") {
      return ListCard{j.at("title").get<std::string>(),
                      j.at("entries").get<std::vector<std::string>>()};
    }
    if (kind == "map_card") {
      return MapCard{j.at("name").get<std::string>(), j.at("lat").get<double>(),
                     j.at("lon").get<double>(), j.at("map_ref").get<std::string>(),
                     j.value("instructions", std::string{})};
    }
    if (kind == "item_card") {
      return ItemCard{j.at("title").get<std::string>(),
                      j.value("subtitle", std::string{}), j.at("rating").get<double>(),
                      j.at("price").get<std::string>(), j.value("body", std::string{})};
    }
    if (kind == "quick_replies") {
      return QuickReplies{j.at("prompt").get<std::string>(),
                          j.at("options").get<std::vector<std::string>>()};
    }
    if (kind == "identify_request") {
      return IdentifyRequest{j.at("reason").get<std::string>()};
    }
    throw Error(ErrorCode::schema_violation, "unknown payload kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema_violation, std::string("payload: ") + e.what());
  }
}

std::string flatten_to_text(const ResponsePayload& payload) {
  return std::visit(
      overloaded{
          [](const TextPayload& p) { return p.text; },
          [](const ItemCard& p) {
            char rating[16];
            std::snprintf(rating, sizeof rating, "%.1f", p.rating);
            std::string out = p.title + " — " + rating + "★ — " + p.price;
            if (!p.body.empty()) out += " — " + p.body;
            return out;
          },
          [](const MapCard& p) {
            char coords[64];
            std::snprintf(coords, sizeof coords, "%.5f,%.5f", p.lat, p.lon);
            std::string out = p.name + " at " + coords;
            if (!p.instructions.empty()) out += ": " + p.instructions;
            return out;
          },
          [](const ListCard& p) {
            std::string out = p.title;
            for (std::size_t i = 0; i < p.entries.size(); ++i) {
              if (!out.empty()) out += '\n';
              out += std::to_string(i + 1) + ". " + p.entries[i];
            }
            return out;
          },
          [](const QuickReplies& p) {
            std::string out = p.prompt;
            if (!p.options.empty()) {
              out += " (";
              for (std::size_t i = 0; i < p.options.size(); ++i) {
                if (i) out += " / ";
                out += p.options[i];
              }
              out += ")";
            }
            return out;
          },
          [](const IdentifyRequest& p) { return p.reason; },
      },
      payload);
}

Response text_response(std::string text, std::string skill, std::string template_id) {
  return Response{TextPayload{std::move(text)}, std::move(skill),
                  std::move(template_id)};
}

}  // namespace confassist
