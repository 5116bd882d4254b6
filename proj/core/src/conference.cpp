#include "confassist/conference.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "confassist/error.hpp"
#include "confassist/nlu.hpp"
#include "confassist/text.hpp"

namespace confassist {

namespace {

bool ordered_before(const ConferenceEvent& a, const ConferenceEvent& b) {
  if (a.start != b.start) return a.start < b.start;
  return a.id < b.id;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::keynote: return "keynote";
    case EventKind::tutorial: return "tutorial";
    case EventKind::workshop: return "workshop";
    case EventKind::session: return "session";
    case EventKind::social: return "social";
  }
  return "session";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (auto k : {EventKind::keynote, EventKind::tutorial, EventKind::workshop,
                 EventKind::session, EventKind::social}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Programme::Programme(std::vector<ConferenceEvent> events) : events_(std::move(events)) {
  if (events_.empty()) {
    throw Error(ErrorCode::empty_collection, "empty-programme: programme has no events");
  }
  std::unordered_set<std::string> ids;
  for (auto& e : events_) {
    if (e.id.empty()) {
      throw Error(ErrorCode::schema_violation, "programme event with empty id");
    }
    if (!ids.insert(e.id).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate programme event id '" + e.id + "'");
    }
    if (!(e.start < e.end)) {
      throw Error(ErrorCode::schema_violation,
                  "programme event '" + e.id + "' field 'end': must be after start");
    }
    for (const auto& t : e.topics) {
      if (t != to_lower(t)) {
        throw Error(ErrorCode::schema_violation, "programme event '" + e.id +
                                                     "' field 'topics': '" + t +
                                                     "' must be lowercase");
      }
    }
    for (auto& t : tokenize(e.title)) e.topics.insert(std::move(t));
    for (auto& t : tokenize(e.abstract)) e.topics.insert(std::move(t));
  }
  std::sort(events_.begin(), events_.end(), ordered_before);
}

const ConferenceEvent* Programme::find(std::string_view id) const {
  for (const auto& e : events_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::vector<std::string> Programme::rooms() const {
  std::vector<std::string> out;
  for (const auto& e : events_) {
    if (!e.room.empty() && std::find(out.begin(), out.end(), e.room) == out.end()) {
      out.push_back(e.room);
    }
  }
  return out;
}

std::vector<std::string> Programme::speakers() const {
  std::vector<std::string> out;
  for (const auto& e : events_) {
    for (const auto& s : e.speakers) {
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

std::chrono::sys_days Programme::first_day() const { return day_of(events_.front().start); }

int Programme::day_number(Instant t) const {
  return static_cast<int>((day_of(t) - first_day()).count()) + 1;
}

Programme Programme::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("schema_version", 0) != 1) {
    throw Error(ErrorCode::invalid_document,
                "programme must be an object with schema_version 1");
  }
  if (!doc.contains("events") || !doc.at("events").is_array()) {
    throw Error(ErrorCode::invalid_document, "programme needs an 'events' list");
  }
  std::vector<ConferenceEvent> events;
  for (const auto& j : doc.at("events")) {
    ConferenceEvent e;
    e.id = j.value("id", std::string{});
    try {
      e.title = j.at("title").get<std::string>();
      const auto kind = j.at("kind").get<std::string>();
      const auto parsed = event_kind_from_string(kind);
      if (!parsed) {
        throw Error(ErrorCode::schema_violation, "programme event '" + e.id +
                                                     "' field 'kind': unknown kind '" +
                                                     kind + "'");
      }
      e.kind = *parsed;
      e.start = parse_rfc3339(j.at("start").get<std::string>());
      e.end = parse_rfc3339(j.at("end").get<std::string>());
      e.room = j.value("room", std::string{});
      e.speakers = j.value("speakers", std::vector<std::string>{});
      e.abstract = j.value("abstract", std::string{});
      for (const auto& t : j.value("topics", std::vector<std::string>{})) e.topics.insert(t);
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::schema_violation, "programme event '" + e.id + "': " + ex.what());
    }
    events.push_back(std::move(e));
  }
  return Programme(std::move(events));
}

Programme Programme::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::not_found, "cannot open programme '" + path + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::invalid_document, "programme '" + path + "': " + e.what());
  }
}

std::vector<ConferenceEvent> keynotes(const Programme& programme) {
  std::vector<ConferenceEvent> out;
  for (const auto& e : programme.events()) {
    if (e.kind == EventKind::keynote) out.push_back(e);
  }
  return out;
}

const ConferenceEvent* next_session(const Programme& programme, Instant now) {
  const ConferenceEvent* best = nullptr;
  for (const auto& e : programme.events()) {
    if (e.start <= now) continue;
    if (best == nullptr || ordered_before(e, *best)) best = &e;
  }
  return best;
}

double interest_score(const ConferenceEvent& event, const InterestProfile& profile) {
  const std::set<std::string> interests(profile.interests.begin(), profile.interests.end());
  return jaccard(event.topics, interests);
}

bool recommendable_kind(EventKind kind) {
  return kind == EventKind::session || kind == EventKind::tutorial ||
         kind == EventKind::workshop;
}

const ConferenceEvent* recommend_session(const Programme& programme,
                                         const InterestProfile& profile, Instant now) {
  const ConferenceEvent* best = nullptr;
  double best_score = 0.0;
  for (const auto& e : programme.events()) {
    if (!recommendable_kind(e.kind) || e.end <= now || profile.recommended_ids.count(e.id)) {
      continue;
    }
    const double score = interest_score(e, profile);
    if (score <= 0.0) continue;
    if (best == nullptr || score > best_score ||
        (score == best_score && ordered_before(e, *best))) {
      best = &e;
      best_score = score;
    }
  }
  return best;
}

ScheduleFilter ScheduleFilter::on_day(std::chrono::sys_days day) {
  ScheduleFilter f;
  f.kind = Kind::day;
  f.day = day;
  return f;
}

ScheduleFilter ScheduleFilter::in_room(std::string room) {
  ScheduleFilter f;
  f.kind = Kind::room;
  f.value = std::move(room);
  return f;
}

ScheduleFilter ScheduleFilter::by_speaker(std::string speaker) {
  ScheduleFilter f;
  f.kind = Kind::speaker;
  f.value = std::move(speaker);
  return f;
}

std::vector<ConferenceEvent> schedule_query(const Programme& programme,
                                            const ScheduleFilter& filter) {
  std::vector<ConferenceEvent> out;
  const std::string wanted = to_lower(filter.value);
  for (const auto& e : programme.events()) {
    bool match = false;
    switch (filter.kind) {
      case ScheduleFilter::Kind::day:
        match = day_of(e.start) == filter.day;
        break;
      case ScheduleFilter::Kind::room:
        match = to_lower(e.room) == wanted;
        break;
      case ScheduleFilter::Kind::speaker:
        match = std::any_of(e.speakers.begin(), e.speakers.end(),
                            [&](const std::string& s) { return to_lower(s) == wanted; });
        break;
    }
    if (match) out.push_back(e);
  }
  return out;
}

}  // namespace confassist
