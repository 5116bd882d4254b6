#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "confassist/time.hpp"

namespace confassist {

enum class EventKind { keynote, tutorial, workshop, session, social };

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

struct ConferenceEvent {
  std::string id;
  std::string title;
  EventKind kind = EventKind::session;
  Instant start{};
  Instant end{};
  std::string room;
  std::vector<std::string> speakers;
  std::string abstract;
  // Declared topics plus every title and abstract token.
  std::set<std::string> topics;

  bool operator==(const ConferenceEvent&) const = default;
};

class Programme {
 public:
  // Validates and sorts by (start, id). Title and abstract tokens are
  // merged into each event's topics.
  explicit Programme(std::vector<ConferenceEvent> events);

  const std::vector<ConferenceEvent>& events() const { return events_; }
  const ConferenceEvent* find(std::string_view id) const;

  std::vector<std::string> rooms() const;
  std::vector<std::string> speakers() const;
  std::chrono::sys_days first_day() const;
  // 1-based index of the conference day containing t.
  int day_number(Instant t) const;

  // {"schema_version": 1, "events": [...]}, times in RFC 3339 UTC.
  static Programme from_json(const nlohmann::json& doc);
  static Programme load(const std::string& path);

 private:
  std::vector<ConferenceEvent> events_;
};

struct InterestProfile {
  std::vector<std::string> interests;
  std::set<std::string> recommended_ids;
};

std::vector<ConferenceEvent> keynotes(const Programme& programme);

// Earliest event starting strictly after now; ties by id.
const ConferenceEvent* next_session(const Programme& programme, Instant now);

// Jaccard overlap between the event's topics and the interests.
double interest_score(const ConferenceEvent& event, const InterestProfile& profile);

bool recommendable_kind(EventKind kind);

// Best future session/tutorial/workshop by (score desc, start asc, id asc),
// skipping already recommended ids and zero scores.
const ConferenceEvent* recommend_session(const Programme& programme,
                                         const InterestProfile& profile, Instant now);

struct ScheduleFilter {
  enum class Kind { day, room, speaker };
  Kind kind = Kind::day;
  std::string value;          // room or speaker name
  std::chrono::sys_days day{};  // Kind::day

  static ScheduleFilter on_day(std::chrono::sys_days day);
  static ScheduleFilter in_room(std::string room);
  static ScheduleFilter by_speaker(std::string speaker);
};

// Matching events in start order; room and speaker match case-insensitively
// on the full name.
std::vector<ConferenceEvent> schedule_query(const Programme& programme,
                                            const ScheduleFilter& filter);

}  // namespace confassist
