#include "confassist/config.hpp"

#include <charconv>
#include <fstream>

#include "confassist/error.hpp"

namespace confassist {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

template <typename T>
T get(const nlohmann::json& doc, const char* key, nlohmann::json::value_t type) {
  const auto& v = doc.at(key);
  const bool ok = v.type() == type ||
                  (type == nlohmann::json::value_t::number_float && v.is_number()) ||
                  (type == nlohmann::json::value_t::number_unsigned && v.is_number_integer() &&
                   v.get<long long>() >= 0);
  if (!ok) throw Error(ErrorCode::schema_violation, std::string("config: '") + key + "' has the wrong type");
  return v.get<T>();
}

long long parse_int(const char* name, const std::string& text, long long lo, long long hi) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < lo || value > hi) {
    throw Error(ErrorCode::schema_violation,
                std::string(name) + ": expected an integer in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "], got '" + text + "'");
  }
  return value;
}

double parse_double(const char* name, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::schema_violation, std::string(name) + ": expected a number, got '" + text + "'");
}

bool parse_bool(const char* name, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw Error(ErrorCode::schema_violation, std::string(name) + ": expected true or false, got '" + text + "'");
}

}  // namespace

ServerConfig ServerConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::invalid_document, "cannot read config " + file.string());
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::invalid_document, "config " + file.string() + " is not JSON");
  return from_json(doc, std::filesystem::absolute(file).parent_path());
}

ServerConfig ServerConfig::from_json(const nlohmann::json& doc, const std::filesystem::path& base) {
  using vt = nlohmann::json::value_t;
  if (!doc.is_object()) throw Error(ErrorCode::schema_violation, "config must be a JSON object");
  ServerConfig c;
  for (const auto& [key, value] : doc.items()) {
    const char* k = key.c_str();
    if (key == "schema_version") {
      if (get<int>(doc, k, vt::number_unsigned) != 1) {
        throw Error(ErrorCode::schema_violation, "config: unsupported schema_version");
      }
    } else if (key == "host") {
      c.host = get<std::string>(doc, k, vt::string);
    } else if (key == "port") {
      const auto p = get<std::uint64_t>(doc, k, vt::number_unsigned);
      if (p > 65535) throw Error(ErrorCode::schema_violation, "config: 'port' out of range");
      c.port = static_cast<std::uint16_t>(p);
    } else if (key == "corpus") {
      c.corpus = resolve(base, get<std::string>(doc, k, vt::string));
    } else if (key == "dialogue") {
      c.dialogue = resolve(base, get<std::string>(doc, k, vt::string));
    } else if (key == "poi_catalog") {
      c.poi_catalog = resolve(base, get<std::string>(doc, k, vt::string));
    } else if (key == "programme") {
      c.programme = resolve(base, get<std::string>(doc, k, vt::string));
    } else if (key == "log_dir") {
      if (!value.is_null()) c.log_dir = resolve(base, get<std::string>(doc, k, vt::string));
    } else if (key == "static_dir") {
      c.static_dir = resolve(base, get<std::string>(doc, k, vt::string));
    } else if (key == "threshold") {
      c.threshold = get<double>(doc, k, vt::number_float);
    } else if (key == "capacity") {
      c.capacity = get<std::size_t>(doc, k, vt::number_unsigned);
    } else if (key == "session_ttl_s") {
      c.session_ttl = std::chrono::seconds(get<std::int64_t>(doc, k, vt::number_unsigned));
    } else if (key == "rest_rich_cards") {
      c.rest_rich_cards = get<bool>(doc, k, vt::boolean);
    } else if (key == "admin_token") {
      c.admin_token = get<std::string>(doc, k, vt::string);
    } else if (key == "map_url_template") {
      c.map_url_template = get<std::string>(doc, k, vt::string);
    } else {
      throw Error(ErrorCode::schema_violation, "config: unknown key '" + key + "'");
    }
  }
  return c;
}

void ServerConfig::apply_env(const Getenv& getenv) {
  const auto env = [&](const char* name) -> std::optional<std::string> {
    const char* v = getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  if (auto v = env("CONFASSIST_HOST")) host = *v;
  if (auto v = env("CONFASSIST_PORT")) {
    port = static_cast<std::uint16_t>(parse_int("CONFASSIST_PORT", *v, 0, 65535));
  }
  if (auto v = env("CONFASSIST_CORPUS")) corpus = *v;
  if (auto v = env("CONFASSIST_DIALOGUE")) dialogue = *v;
  if (auto v = env("CONFASSIST_POI_CATALOG")) poi_catalog = *v;
  if (auto v = env("CONFASSIST_PROGRAMME")) programme = *v;
  if (auto v = env("CONFASSIST_LOG_DIR")) log_dir = std::filesystem::path(*v);
  if (auto v = env("CONFASSIST_STATIC_DIR")) static_dir = *v;
  if (auto v = env("CONFASSIST_THRESHOLD")) threshold = parse_double("CONFASSIST_THRESHOLD", *v);
  if (auto v = env("CONFASSIST_CAPACITY")) {
    capacity = static_cast<std::size_t>(parse_int("CONFASSIST_CAPACITY", *v, 1, 1'000'000));
  }
  if (auto v = env("CONFASSIST_SESSION_TTL")) {
    session_ttl = std::chrono::seconds(parse_int("CONFASSIST_SESSION_TTL", *v, 1, 7 * 86400));
  }
  if (auto v = env("CONFASSIST_REST_RICH_CARDS")) {
    rest_rich_cards = parse_bool("CONFASSIST_REST_RICH_CARDS", *v);
  }
  if (auto v = env("CONFASSIST_ADMIN_TOKEN")) admin_token = *v;
  if (auto v = env("CONFASSIST_MAP_URL_TEMPLATE")) map_url_template = *v;
}

void ServerConfig::validate() const {
  const auto need = [](const std::filesystem::path& p, const char* name) {
    if (p.empty()) throw Error(ErrorCode::schema_violation, std::string("config: '") + name + "' is required");
  };
  need(corpus, "corpus");
  need(dialogue, "dialogue");
  need(poi_catalog, "poi_catalog");
  need(programme, "programme");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::schema_violation, "config: 'threshold' must be in (0, 1]");
  }
  if (capacity == 0) throw Error(ErrorCode::schema_violation, "config: 'capacity' must be positive");
  if (session_ttl.count() <= 0) {
    throw Error(ErrorCode::schema_violation, "config: 'session_ttl_s' must be positive");
  }
}

AssistantOptions ServerConfig::assistant_options() const {
  AssistantOptions o;
  o.corpus_path = corpus.string();
  o.dialogue_path = dialogue.string();
  o.poi_catalog_path = poi_catalog.string();
  o.programme_path = programme.string();
  o.threshold = threshold;
  o.map_url_template = map_url_template;
  o.state_dir = log_dir;
  return o;
}

GatewayOptions ServerConfig::gateway_options() const {
  GatewayOptions o;
  o.capacity = capacity;
  o.session_ttl = session_ttl;
  o.rest_rich_cards = rest_rich_cards;
  return o;
}

ServerOptions ServerConfig::server_options() const {
  ServerOptions o;
  o.host = host;
  o.port = port;
  o.static_dir = static_dir;
  o.admin_token = admin_token;
  return o;
}

}  // namespace confassist
