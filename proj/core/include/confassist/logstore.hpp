#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "confassist/time.hpp"

namespace confassist {

enum class Direction { user, bot };

struct LogRecord {
  std::string session_id;
  int turn = 0;
  int seq = 0;
  Instant timestamp{};
  Direction direction = Direction::user;
  std::string text;
  std::optional<std::string> intent;
  std::optional<std::string> skill;
  std::string channel_kind;
  std::optional<std::string> user_id;

  bool operator==(const LogRecord&) const = default;
};

nlohmann::json to_json(const LogRecord& record);
LogRecord log_record_from_json(const nlohmann::json& j);

class LogSink {
 public:
  virtual ~LogSink() = default;
  // Returns false when the record could not be stored; never throws for
  // storage failures.
  virtual bool append(const LogRecord& record) = 0;
};

// Append-only conversation log. With a directory it writes newline-delimited
// JSON, one file per UTC day ("conversations-YYYY-MM-DD.ndjson"), flushing
// every line before returning. Without one it keeps records in memory.
class LogStore : public LogSink {
 public:
  LogStore();
  explicit LogStore(std::filesystem::path dir);

  // Rejects records whose (session_id, direction, turn, seq) key already
  // exists by throwing Error(duplicate_id). Storage failures return false
  // and are counted for the health endpoint.
  bool append(const LogRecord& record) override;

  std::vector<LogRecord> records() const;
  std::vector<LogRecord> transcript(const std::string& session_id) const;

  // Removes user attribution from every record of user_id and replaces
  // occurrences of `redact` (when non-empty) in their text. Rewrites the
  // day files atomically. Returns the number of records touched.
  std::size_t scrub_user(const std::string& user_id, const std::string& redact = {});

  std::size_t failure_count() const { return failures_.load(); }
  const std::optional<std::filesystem::path>& dir() const { return dir_; }

  // Reads every day file under dir; a torn trailing line is ignored and
  // duplicate keys are dropped, so loading is idempotent.
  static std::vector<LogRecord> load(const std::filesystem::path& dir);

 private:
  using Key = std::tuple<std::string, int, int, int>;
  static Key key_of(const LogRecord& r);

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mutex_;
  std::vector<LogRecord> records_;
  std::set<Key> keys_;
  std::atomic<std::size_t> failures_{0};
};

// Conversation length = number of user turns in a session.
std::map<int, int> conversation_length_histogram(std::span<const LogRecord> records);

// Bot records per skill; records without a skill count as "core".
std::map<std::string, int> turns_per_skill(std::span<const LogRecord> records);

}  // namespace confassist
