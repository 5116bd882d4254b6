#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "confassist/time.hpp"

namespace confassist {

enum class Consent { unknown, granted, denied };

std::string_view to_string(Consent consent);
Consent consent_from_string(std::string_view name);

inline constexpr std::string_view kBadgePrefix = "dagfinn1:";

// "dagfinn1:<user_id>" -> user_id; none for any other payload.
std::optional<std::string> parse_badge(std::string_view token);
std::string badge_token(std::string_view user_id);
bool is_badge_token(std::string_view token);

struct ProfileMemory {
  std::vector<std::string> accepted_poi_ids;
  std::vector<std::string> interests;
  std::optional<Instant> last_seen;

  bool empty() const {
    return accepted_poi_ids.empty() && interests.empty() && !last_seen;
  }
  bool operator==(const ProfileMemory&) const = default;
};

struct UserProfile {
  std::string user_id;
  std::optional<std::string> display_name;
  Consent consent = Consent::unknown;
  std::set<std::string> identifiers;
  ProfileMemory memory;

  bool operator==(const UserProfile&) const = default;
};

nlohmann::json to_json(const UserProfile& profile);
UserProfile profile_from_json(const nlohmann::json& j);

// Greeting bindings and carry-over context for a bound profile. Empty
// unless consent is granted.
struct Personalization {
  std::map<std::string, std::string> bindings;  // "name" when known
  std::vector<std::string> prior_interests;
  std::vector<std::string> excluded_poi_ids;

  bool greet_by_name() const { return bindings.count("name") != 0; }
};

Personalization personalize(const UserProfile& profile);

struct AuditEntry {
  std::string op;  // "create", "consent", "link", "purge", "memory_write", "delete"
  std::string user_id;
  std::string detail;
  Instant at{};
};

// Profiles keyed by user id with a global identifier index. Reads are
// shared; every write takes the store-wide exclusive lock. With a directory
// the store persists to "profiles.json" (rewritten atomically) and appends
// audit entries to "profile_audit.ndjson".
class ProfileStore {
 public:
  ProfileStore();
  explicit ProfileStore(std::filesystem::path dir);

  std::optional<UserProfile> identify(std::string_view token) const;
  std::optional<UserProfile> find(std::string_view user_id) const;
  std::vector<UserProfile> all() const;

  // Throws Error(duplicate_id) if the user exists or a token is taken.
  UserProfile create(const std::string& user_id,
                     std::optional<std::string> display_name,
                     std::vector<std::string> identifiers, Instant now = {});

  // Binds another identifier. Non-badge tokens require granted consent.
  // Throws Error(duplicate_id) if the token belongs to another profile.
  UserProfile link(const std::string& user_id, const std::string& token,
                   Instant now = {});

  // Latest answer wins. Denial purges every identifier except badge tokens
  // and clears memory.
  UserProfile record_consent(const std::string& user_id, Consent decision,
                             Instant now = {});

  // Memory writes; no-ops returning false unless consent is granted.
  bool remember_poi(const std::string& user_id, const std::string& poi_id, Instant now);
  bool remember_interests(const std::string& user_id,
                          const std::vector<std::string>& interests, Instant now);
  bool touch(const std::string& user_id, Instant now);

  bool remove(const std::string& user_id, Instant now = {});

  std::vector<AuditEntry> audit() const;
  std::size_t memory_writes(const std::string& user_id) const;

  nlohmann::json export_json() const;
  // Adds profiles from an exported document; existing ids are replaced.
  void import_json(const nlohmann::json& doc, Instant now = {});

 private:
  UserProfile& at(const std::string& user_id);
  void persist_locked() const;
  void audit_locked(std::string op, const std::string& user_id, std::string detail,
                    Instant now);
  bool write_memory_locked(const std::string& user_id, const std::string& detail,
                           Instant now, const std::function<void(ProfileMemory&)>& fn);

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, UserProfile, std::less<>> profiles_;
  std::map<std::string, std::string, std::less<>> owner_of_token_;
  std::vector<AuditEntry> audit_;
};

}  // namespace confassist
