#include "confassist/logstore.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "confassist/error.hpp"

namespace confassist {

namespace {

std::string_view direction_name(Direction d) { return d == Direction::user ? "user" : "bot"; }

std::filesystem::path day_file(const std::filesystem::path& dir, Instant t) {
  return dir / ("conversations-" + format_date(t) + ".ndjson");
}

void replace_all(std::string& text, const std::string& needle, const std::string& with) {
  if (needle.empty()) return;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + with.size())) {
    text.replace(pos, needle.size(), with);
  }
}

}  // namespace

nlohmann::json to_json(const LogRecord& r) {
  nlohmann::json j{{"session_id", r.session_id},
                   {"turn", r.turn},
                   {"seq", r.seq},
                   {"timestamp", format_rfc3339(r.timestamp)},
                   {"direction", direction_name(r.direction)},
                   {"text", r.text},
                   {"channel_kind", r.channel_kind}};
  j["intent"] = r.intent ? nlohmann::json(*r.intent) : nlohmann::json(nullptr);
  j["skill"] = r.skill ? nlohmann::json(*r.skill) : nlohmann::json(nullptr);
  j["user_id"] = r.user_id ? nlohmann::json(*r.user_id) : nlohmann::json(nullptr);
  return j;
}

LogRecord log_record_from_json(const nlohmann::json& j) {
  LogRecord r;
  try {
    r.session_id = j.at("session_id").get<std::string>();
    r.turn = j.at("turn").get<int>();
    r.seq = j.at("seq").get<int>();
    r.timestamp = parse_rfc3339(j.at("timestamp").get<std::string>());
    const auto dir = j.at("direction").get<std::string>();
    if (dir == "user") {
      r.direction = Direction::user;
    } else if (dir == "bot") {
      r.direction = Direction::bot;
    } else {
      throw Error(ErrorCode::schema_violation, "log record direction '" + dir + "'");
    }
    r.text = j.at("text").get<std::string>();
    r.channel_kind = j.value("channel_kind", std::string{});
    auto opt = [&](const char* key) -> std::optional<std::string> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return j.at(key).get<std::string>();
    };
    r.intent = opt("intent");
    r.skill = opt("skill");
    r.user_id = opt("user_id");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema_violation, std::string("log record: ") + e.what());
  }
  return r;
}

LogStore::LogStore() = default;

LogStore::LogStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
  for (auto& r : load(*dir_)) {
    keys_.insert(key_of(r));
    records_.push_back(std::move(r));
  }
}

LogStore::Key LogStore::key_of(const LogRecord& r) {
  return {r.session_id, static_cast<int>(r.direction), r.turn, r.seq};
}

bool LogStore::append(const LogRecord& record) {
  std::lock_guard lock(mutex_);
  const auto key = key_of(record);
  if (keys_.count(key)) {
    throw Error(ErrorCode::duplicate_id,
                "log record already stored for session '" + record.session_id + "' turn " +
                    std::to_string(record.turn) + " seq " + std::to_string(record.seq));
  }
  if (dir_) {
    std::ofstream out(day_file(*dir_, record.timestamp), std::ios::app);
    out << to_json(record).dump() << '\n';
    out.flush();
    if (!out) {
      ++failures_;
      return false;
    }
  }
  keys_.insert(key);
  records_.push_back(record);
  return true;
}

std::vector<LogRecord> LogStore::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::vector<LogRecord> LogStore::transcript(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  std::vector<LogRecord> out;
  std::copy_if(records_.begin(), records_.end(), std::back_inserter(out),
               [&](const LogRecord& r) { return r.session_id == session_id; });
  std::stable_sort(out.begin(), out.end(), [](const LogRecord& a, const LogRecord& b) {
    return std::tie(a.turn, a.direction, a.seq) < std::tie(b.turn, b.direction, b.seq);
  });
  return out;
}

std::size_t LogStore::scrub_user(const std::string& user_id, const std::string& redact) {
  std::lock_guard lock(mutex_);
  std::set<std::string> sessions;
  for (const auto& r : records_) {
    if (r.user_id == user_id) sessions.insert(r.session_id);
  }
  std::size_t touched = 0;
  for (auto& r : records_) {
    if (!sessions.count(r.session_id)) continue;
    r.user_id.reset();
    replace_all(r.text, redact, "[redacted]");
    ++touched;
  }
  if (dir_ && touched) {
    std::map<std::string, std::vector<const LogRecord*>> by_file;
    for (const auto& r : records_) {
      by_file[day_file(*dir_, r.timestamp).string()].push_back(&r);
    }
    for (const auto& [file, list] : by_file) {
      const auto tmp = file + ".tmp";
      {
        std::ofstream out(tmp, std::ios::trunc);
        for (const auto* r : list) out << to_json(*r).dump() << '\n';
        out.flush();
        if (!out) throw Error(ErrorCode::storage, "cannot rewrite " + file);
      }
      std::filesystem::rename(tmp, file);
    }
  }
  return touched;
}

std::vector<LogRecord> LogStore::load(const std::filesystem::path& dir) {
  static const std::regex name_re(R"(conversations-\d{4}-\d{2}-\d{2}\.ndjson)");
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::exists(dir)) return {};
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() &&
        std::regex_match(entry.path().filename().string(), name_re)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<LogRecord> out;
  std::set<Key> seen;
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      LogRecord r;
      try {
        r = log_record_from_json(nlohmann::json::parse(line));
      } catch (const std::exception&) {
        if (in.peek() == std::char_traits<char>::eof()) break;  // torn tail
        throw Error(ErrorCode::invalid_document, "corrupt log line in " + file.string());
      }
      if (seen.insert(key_of(r)).second) out.push_back(std::move(r));
    }
  }
  return out;
}

std::map<int, int> conversation_length_histogram(std::span<const LogRecord> records) {
  std::map<std::string, int> turns;
  for (const auto& r : records) {
    auto& n = turns[r.session_id];
    if (r.direction == Direction::user) ++n;
  }
  std::map<int, int> histogram;
  for (const auto& [session, n] : turns) ++histogram[n];
  return histogram;
}

std::map<std::string, int> turns_per_skill(std::span<const LogRecord> records) {
  std::map<std::string, int> out;
  for (const auto& r : records) {
    if (r.direction != Direction::bot) continue;
    ++out[r.skill.value_or("core")];
  }
  return out;
}

}  // namespace confassist
