#include "confassist/profile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>

#include "confassist/error.hpp"

namespace confassist {

std::string_view to_string(Consent consent) {
  switch (consent) {
    case Consent::unknown: return "unknown";
    case Consent::granted: return "granted";
    case Consent::denied: return "denied";
  }
  return "unknown";
}

Consent consent_from_string(std::string_view name) {
  if (name == "granted") return Consent::granted;
  if (name == "denied") return Consent::denied;
  if (name == "unknown") return Consent::unknown;
  throw Error(ErrorCode::schema_violation, "unknown consent '" + std::string(name) + "'");
}

std::optional<std::string> parse_badge(std::string_view token) {
  if (token.size() <= kBadgePrefix.size() || token.substr(0, kBadgePrefix.size()) != kBadgePrefix) {
    return std::nullopt;
  }
  const auto id = token.substr(kBadgePrefix.size());
  const bool ok = std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
  if (!ok) return std::nullopt;
  return std::string(id);
}

std::string badge_token(std::string_view user_id) {
  return std::string(kBadgePrefix) + std::string(user_id);
}

bool is_badge_token(std::string_view token) { return parse_badge(token).has_value(); }

nlohmann::json to_json(const UserProfile& p) {
  nlohmann::json memory{{"accepted_poi_ids", p.memory.accepted_poi_ids},
                        {"interests", p.memory.interests}};
  if (p.memory.last_seen) memory["last_seen"] = format_rfc3339(*p.memory.last_seen);
  nlohmann::json j{{"user_id", p.user_id},
                   {"consent", to_string(p.consent)},
                   {"identifiers", p.identifiers},
                   {"memory", memory}};
  if (p.display_name) j["display_name"] = *p.display_name;
  return j;
}

UserProfile profile_from_json(const nlohmann::json& j) {
  UserProfile p;
  try {
    p.user_id = j.at("user_id").get<std::string>();
    if (j.contains("display_name")) p.display_name = j.at("display_name").get<std::string>();
    p.consent = consent_from_string(j.value("consent", std::string("unknown")));
    for (const auto& t : j.value("identifiers", std::vector<std::string>{})) {
      p.identifiers.insert(t);
    }
    const auto memory = j.value("memory", nlohmann::json::object());
    p.memory.accepted_poi_ids = memory.value("accepted_poi_ids", std::vector<std::string>{});
    p.memory.interests = memory.value("interests", std::vector<std::string>{});
    if (memory.contains("last_seen")) {
      p.memory.last_seen = parse_rfc3339(memory.at("last_seen").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema_violation, std::string("profile: ") + e.what());
  }
  if (p.user_id.empty()) throw Error(ErrorCode::schema_violation, "profile with empty user_id");
  return p;
}

Personalization personalize(const UserProfile& profile) {
  Personalization out;
  if (profile.consent != Consent::granted) return out;
  if (profile.display_name) out.bindings["name"] = *profile.display_name;
  out.prior_interests = profile.memory.interests;
  out.excluded_poi_ids = profile.memory.accepted_poi_ids;
  return out;
}

ProfileStore::ProfileStore() = default;

ProfileStore::ProfileStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
  const auto file = *dir_ / "profiles.json";
  if (std::filesystem::exists(file)) {
    std::ifstream in(file);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::invalid_document, "profiles.json: " + std::string(e.what()));
    }
    for (const auto& j : doc.value("profiles", nlohmann::json::array())) {
      auto p = profile_from_json(j);
      for (const auto& t : p.identifiers) owner_of_token_[t] = p.user_id;
      profiles_[p.user_id] = std::move(p);
    }
  }
  const auto audit = *dir_ / "profile_audit.ndjson";
  if (std::filesystem::exists(audit)) {
    std::ifstream in(audit);
    std::string line;
    while (std::getline(in, line)) {
      try {
        const auto j = nlohmann::json::parse(line);
        audit_.push_back(AuditEntry{j.at("op").get<std::string>(),
                                    j.at("user_id").get<std::string>(),
                                    j.value("detail", std::string{}),
                                    parse_rfc3339(j.at("at").get<std::string>())});
      } catch (const std::exception&) {
        // torn trailing line
      }
    }
  }
}

std::optional<UserProfile> ProfileStore::identify(std::string_view token) const {
  std::shared_lock lock(mutex_);
  const auto it = owner_of_token_.find(token);
  if (it == owner_of_token_.end()) return std::nullopt;
  return profiles_.at(it->second);
}

std::optional<UserProfile> ProfileStore::find(std::string_view user_id) const {
  std::shared_lock lock(mutex_);
  const auto it = profiles_.find(user_id);
  if (it == profiles_.end()) return std::nullopt;
  return it->second;
}

std::vector<UserProfile> ProfileStore::all() const {
  std::shared_lock lock(mutex_);
  std::vector<UserProfile> out;
  for (const auto& [id, p] : profiles_) out.push_back(p);
  return out;
}

UserProfile& ProfileStore::at(const std::string& user_id) {
  const auto it = profiles_.find(user_id);
  if (it == profiles_.end()) {
    throw Error(ErrorCode::not_found, "unknown profile '" + user_id + "'");
  }
  return it->second;
}

UserProfile ProfileStore::create(const std::string& user_id,
                                 std::optional<std::string> display_name,
                                 std::vector<std::string> identifiers, Instant now) {
  std::unique_lock lock(mutex_);
  if (user_id.empty()) throw Error(ErrorCode::schema_violation, "empty user id");
  if (profiles_.count(user_id)) {
    throw Error(ErrorCode::duplicate_id, "profile '" + user_id + "' already exists");
  }
  for (const auto& t : identifiers) {
    if (const auto it = owner_of_token_.find(t); it != owner_of_token_.end()) {
      throw Error(ErrorCode::duplicate_id,
                  "identifier already bound to profile '" + it->second + "'");
    }
  }
  UserProfile p;
  p.user_id = user_id;
  p.display_name = std::move(display_name);
  for (auto& t : identifiers) {
    owner_of_token_[t] = user_id;
    p.identifiers.insert(std::move(t));
  }
  profiles_[user_id] = p;
  audit_locked("create", user_id, {}, now);
  persist_locked();
  return p;
}

UserProfile ProfileStore::link(const std::string& user_id, const std::string& token,
                               Instant now) {
  std::unique_lock lock(mutex_);
  auto& p = at(user_id);
  if (const auto it = owner_of_token_.find(token); it != owner_of_token_.end()) {
    if (it->second == user_id) return p;
    throw Error(ErrorCode::duplicate_id,
                "identifier already bound to profile '" + it->second + "'");
  }
  if (!is_badge_token(token) && p.consent != Consent::granted) {
    throw Error(ErrorCode::protocol,
                "profile '" + user_id + "' has not consented to recognition");
  }
  p.identifiers.insert(token);
  owner_of_token_[token] = user_id;
  audit_locked("link", user_id, is_badge_token(token) ? "badge" : "recognition", now);
  persist_locked();
  return p;
}

UserProfile ProfileStore::record_consent(const std::string& user_id, Consent decision,
                                         Instant now) {
  std::unique_lock lock(mutex_);
  auto& p = at(user_id);
  p.consent = decision;
  audit_locked("consent", user_id, std::string(to_string(decision)), now);
  if (decision != Consent::granted) {
    std::size_t purged = 0;
    for (auto it = p.identifiers.begin(); it != p.identifiers.end();) {
      if (is_badge_token(*it)) {
        ++it;
        continue;
      }
      owner_of_token_.erase(*it);
      it = p.identifiers.erase(it);
      ++purged;
    }
    const bool had_memory = !p.memory.empty();
    p.memory = {};
    if (purged || had_memory) {
      audit_locked("purge", user_id,
                   std::to_string(purged) + " identifiers" + (had_memory ? ", memory" : ""),
                   now);
    }
  }
  persist_locked();
  return p;
}

bool ProfileStore::write_memory_locked(const std::string& user_id, const std::string& detail,
                                       Instant now,
                                       const std::function<void(ProfileMemory&)>& fn) {
  const auto it = profiles_.find(user_id);
  if (it == profiles_.end() || it->second.consent != Consent::granted) return false;
  fn(it->second.memory);
  it->second.memory.last_seen = now;
  audit_locked("memory_write", user_id, detail, now);
  persist_locked();
  return true;
}

bool ProfileStore::remember_poi(const std::string& user_id, const std::string& poi_id,
                                Instant now) {
  std::unique_lock lock(mutex_);
  return write_memory_locked(user_id, "poi " + poi_id, now, [&](ProfileMemory& m) {
    if (std::find(m.accepted_poi_ids.begin(), m.accepted_poi_ids.end(), poi_id) ==
        m.accepted_poi_ids.end()) {
      m.accepted_poi_ids.push_back(poi_id);
    }
  });
}

bool ProfileStore::remember_interests(const std::string& user_id,
                                      const std::vector<std::string>& interests,
                                      Instant now) {
  std::unique_lock lock(mutex_);
  return write_memory_locked(user_id, "interests", now, [&](ProfileMemory& m) {
    for (const auto& i : interests) {
      if (std::find(m.interests.begin(), m.interests.end(), i) == m.interests.end()) {
        m.interests.push_back(i);
      }
    }
  });
}

bool ProfileStore::touch(const std::string& user_id, Instant now) {
  std::unique_lock lock(mutex_);
  return write_memory_locked(user_id, "last_seen", now, [](ProfileMemory&) {});
}

bool ProfileStore::remove(const std::string& user_id, Instant now) {
  std::unique_lock lock(mutex_);
  const auto it = profiles_.find(user_id);
  if (it == profiles_.end()) return false;
  for (const auto& t : it->second.identifiers) owner_of_token_.erase(t);
  profiles_.erase(it);
  audit_locked("delete", user_id, {}, now);
  persist_locked();
  return true;
}

std::vector<AuditEntry> ProfileStore::audit() const {
  std::shared_lock lock(mutex_);
  return audit_;
}

std::size_t ProfileStore::memory_writes(const std::string& user_id) const {
  std::shared_lock lock(mutex_);
  return static_cast<std::size_t>(std::count_if(
      audit_.begin(), audit_.end(),
      [&](const AuditEntry& e) { return e.op == "memory_write" && e.user_id == user_id; }));
}

nlohmann::json ProfileStore::export_json() const {
  std::shared_lock lock(mutex_);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [id, p] : profiles_) list.push_back(to_json(p));
  return {{"schema_version", 1}, {"profiles", list}};
}

void ProfileStore::import_json(const nlohmann::json& doc, Instant now) {
  if (!doc.is_object() || doc.value("schema_version", 0) != 1) {
    throw Error(ErrorCode::invalid_document,
                "profile document must be an object with schema_version 1");
  }
  std::vector<UserProfile> incoming;
  for (const auto& j : doc.value("profiles", nlohmann::json::array())) {
    incoming.push_back(profile_from_json(j));
  }
  std::unique_lock lock(mutex_);
  for (auto& p : incoming) {
    if (p.consent != Consent::granted) p.memory = {};
    if (const auto it = profiles_.find(p.user_id); it != profiles_.end()) {
      for (const auto& t : it->second.identifiers) owner_of_token_.erase(t);
    }
    for (const auto& t : p.identifiers) {
      if (const auto it = owner_of_token_.find(t);
          it != owner_of_token_.end() && it->second != p.user_id) {
        throw Error(ErrorCode::duplicate_id,
                    "identifier of '" + p.user_id + "' already bound to '" + it->second + "'");
      }
    }
    for (const auto& t : p.identifiers) owner_of_token_[t] = p.user_id;
    audit_locked("create", p.user_id, "import", now);
    profiles_[p.user_id] = std::move(p);
  }
  persist_locked();
}

void ProfileStore::audit_locked(std::string op, const std::string& user_id,
                                std::string detail, Instant now) {
  AuditEntry entry{std::move(op), user_id, std::move(detail), now};
  if (dir_) {
    std::ofstream out(*dir_ / "profile_audit.ndjson", std::ios::app);
    out << nlohmann::json{{"op", entry.op},
                          {"user_id", entry.user_id},
                          {"detail", entry.detail},
                          {"at", format_rfc3339(entry.at)}}
               .dump()
        << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::storage, "cannot append profile audit log");
  }
  audit_.push_back(std::move(entry));
}

void ProfileStore::persist_locked() const {
  if (!dir_) return;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [id, p] : profiles_) list.push_back(to_json(p));
  const nlohmann::json doc{{"schema_version", 1}, {"profiles", list}};
  const auto file = *dir_ / "profiles.json";
  const auto tmp = *dir_ / "profiles.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::storage, "cannot write profiles.json");
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace confassist
