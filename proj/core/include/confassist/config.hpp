#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "confassist/assistant.hpp"
#include "confassist/gateway.hpp"
#include "confassist/server.hpp"

namespace confassist {

// Server settings from one JSON file. Relative paths in the file resolve
// against the file's directory; relative paths from the environment or the
// command line resolve against the working directory.
struct ServerConfig {
  std::string host = "0.0.0.0";
  std::uint16_t port = 8080;
  std::filesystem::path corpus;
  std::filesystem::path dialogue;
  std::filesystem::path poi_catalog;
  std::filesystem::path programme;
  std::optional<std::filesystem::path> log_dir;
  std::filesystem::path static_dir;
  double threshold = kDefaultThreshold;
  std::size_t capacity = 1000;
  std::chrono::seconds session_ttl{1800};
  bool rest_rich_cards = false;
  std::string admin_token;
  std::string map_url_template = AssistantOptions{}.map_url_template;

  // Throws Error(invalid_document) for unreadable files and
  // Error(schema_violation) for unknown keys or wrong types.
  static ServerConfig load(const std::filesystem::path& file);
  static ServerConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base);

  using Getenv = std::function<const char*(const char*)>;
  // CONFASSIST_HOST, _PORT, _CORPUS, _DIALOGUE, _POI_CATALOG, _PROGRAMME,
  // _LOG_DIR, _STATIC_DIR, _THRESHOLD, _CAPACITY, _SESSION_TTL,
  // _REST_RICH_CARDS, _ADMIN_TOKEN, _MAP_URL_TEMPLATE.
  void apply_env(const Getenv& getenv);

  // Throws Error(schema_violation) naming the first missing or bad field.
  void validate() const;

  AssistantOptions assistant_options() const;
  GatewayOptions gateway_options() const;
  ServerOptions server_options() const;
};

}  // namespace confassist
