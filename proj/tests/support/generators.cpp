#include "generators.hpp"

#include <algorithm>
#include <set>

#include "confassist/time.hpp"

namespace confassist::testing {

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::vector<std::string> sample(Rng& rng, const std::vector<std::string>& pool, int count) {
  std::vector<std::string> copy = pool;
  std::shuffle(copy.begin(), copy.end(), rng);
  copy.resize(std::min<std::size_t>(copy.size(), static_cast<std::size_t>(count)));
  return copy;
}

}  // namespace

const std::vector<std::string>& poi_keyword_pool() {
  static const std::vector<std::string> pool = {
      "indian", "italian", "thai", "sushi", "vegan", "seafood", "pizza", "burger",
      "running", "view", "history", "art", "kids", "quiet", "live-music", "outdoor"};
  return pool;
}

const std::vector<std::string>& topic_pool() {
  static const std::vector<std::string> pool = {
      "recommendation", "dialogue", "search", "fairness", "privacy", "music",
      "evaluation", "explanations", "graphs", "news", "users", "bandits"};
  return pool;
}

std::vector<PoiItem> random_catalog(Rng& rng, std::size_t size) {
  static const std::vector<PoiCategory> categories = {
      PoiCategory::restaurant, PoiCategory::bar,  PoiCategory::cafe,
      PoiCategory::museum,     PoiCategory::park, PoiCategory::activity};
  static const std::vector<double> ratings = {3.5, 4.0, 4.2, 4.5, 4.5, 4.8, 5.0};
  static const std::vector<int> reviews = {0, 10, 80, 120, 120, 300};
  std::vector<PoiItem> items;
  for (std::size_t i = 0; i < size; ++i) {
    PoiItem item;
    item.id = "p" + std::to_string(i);
    // Names collide on the leading word so the name tie-break matters.
    item.name = std::string(1, static_cast<char>('A' + uniform(rng, 0, 5))) + " Place " +
                std::to_string(i);
    item.category = pick(rng, categories);
    for (const auto& k : sample(rng, poi_keyword_pool(), uniform(rng, 0, 4))) {
      item.keywords.insert(k);
    }
    item.price_level = uniform(rng, 1, 4);
    item.rating = pick(rng, ratings);
    item.review_count = pick(rng, reviews);
    item.address = std::to_string(uniform(rng, 1, 99)) + " Harbour Street";
    item.lat = 58.9 + uniform(rng, 0, 1000) / 10000.0;
    item.lon = 5.7 + uniform(rng, 0, 1000) / 10000.0;
    for (auto mode : {TransportMode::walk, TransportMode::bus, TransportMode::taxi}) {
      if (coin(rng, 0.6)) {
        item.transport_options.push_back({mode, "Go " + std::string(to_string(mode)) + ".",
                                          uniform(rng, 3, 20)});
      }
    }
    item.description = "Generated place number " + std::to_string(i) + ".";
    items.push_back(std::move(item));
  }
  return items;
}

PoiPreferences random_preferences(Rng& rng, const std::vector<PoiItem>& items) {
  static const std::vector<PoiCategory> categories = {
      PoiCategory::restaurant, PoiCategory::bar,  PoiCategory::cafe,
      PoiCategory::museum,     PoiCategory::park, PoiCategory::activity};
  PoiPreferences prefs;
  if (coin(rng, 0.85)) prefs.category = pick(rng, categories);
  for (const auto& k : sample(rng, poi_keyword_pool(), uniform(rng, 0, 3))) prefs.like(k);
  for (const auto& k : sample(rng, poi_keyword_pool(), uniform(rng, 0, 3))) prefs.dislike(k);
  for (const auto& item : items) {
    if (coin(rng, 0.15)) prefs.reject(item.id);
  }
  return prefs;
}

std::vector<ConferenceEvent> random_events(Rng& rng, std::size_t size) {
  static const std::vector<EventKind> kinds = {EventKind::keynote, EventKind::tutorial,
                                               EventKind::workshop, EventKind::session,
                                               EventKind::session, EventKind::social};
  static const std::vector<std::string> rooms = {"Main Hall", "Room A", "Room B", "Room C"};
  static const std::vector<std::string> filler = {"towards", "better", "with", "for",
                                                  "in", "the", "wild", "systems"};
  const Instant day0 = parse_rfc3339("2026-06-15T00:00:00Z");
  std::vector<ConferenceEvent> events;
  for (std::size_t i = 0; i < size; ++i) {
    ConferenceEvent e;
    e.id = "e" + std::to_string(100 + uniform(rng, 0, 899)) + "-" + std::to_string(i);
    e.kind = pick(rng, kinds);
    const int day = uniform(rng, 0, 2);
    const int slot = uniform(rng, 0, 7);  // 09:00 + 1h steps
    e.start = day0 + std::chrono::hours(24 * day + 9 + slot);
    e.end = e.start + std::chrono::minutes(30 * uniform(rng, 1, 4));
    e.room = pick(rng, rooms);
    e.speakers = {"Speaker " + std::to_string(uniform(rng, 1, 9))};
    std::string title;
    for (int w = 0; w < uniform(rng, 1, 4); ++w) {
      title += (w ? " " : "") + (coin(rng) ? pick(rng, topic_pool()) : pick(rng, filler));
    }
    e.title = title;
    if (coin(rng)) e.title[0] = static_cast<char>(std::toupper(e.title[0]));
    e.abstract = coin(rng) ? "We study " + pick(rng, topic_pool()) + " at scale." : "";
    for (const auto& t : sample(rng, topic_pool(), uniform(rng, 0, 3))) e.topics.insert(t);
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<std::string> random_interests(Rng& rng) {
  auto out = sample(rng, topic_pool(), uniform(rng, 1, 3));
  if (coin(rng, 0.1)) out.push_back("astronomy");
  return out;
}

UtteranceGenerator::UtteranceGenerator(const IntentCorpus& corpus) {
  std::set<std::string> words;
  for (const auto& spec : corpus.intents) {
    for (const auto& e : spec.examples) {
      examples_.push_back(e);
      std::string w;
      for (char c : e + " ") {
        if (c == ' ') {
          if (!w.empty()) words.insert(w);
          w.clear();
        } else {
          w += c;
        }
      }
    }
  }
  for (const auto& g : corpus.gazetteers) {
    for (const auto& [surface, value] : g.entries) words.insert(surface);
  }
  for (const char* noise : {"blorp", "xqzzy", "zebra", "quantum", "42", "teapot", "it's"}) {
    words.insert(noise);
  }
  words_.assign(words.begin(), words.end());
}

std::string UtteranceGenerator::operator()(Rng& rng) const {
  if (coin(rng, 0.15)) return pick(rng, examples_);
  static const std::vector<std::string> seps = {" ", " ", " ", ", ", "! ", "? ", " - "};
  std::string out;
  const int n = uniform(rng, 0, 8);
  for (int i = 0; i < n; ++i) {
    if (i) out += pick(rng, seps);
    std::string w = pick(rng, words_);
    if (coin(rng, 0.2)) {
      for (auto& c : w) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    out += w;
  }
  if (coin(rng, 0.3)) out += "?";
  return out;
}

std::vector<LogRecord> plant_records(const std::vector<PlantedSession>& sessions, Instant start) {
  std::vector<LogRecord> out;
  Instant t = start;
  for (const auto& s : sessions) {
    for (std::size_t turn = 0; turn < s.bot_skills.size(); ++turn) {
      LogRecord user;
      user.session_id = s.id;
      user.turn = static_cast<int>(turn) + 1;
      user.seq = 0;
      user.timestamp = t;
      user.direction = Direction::user;
      user.text = "utterance " + std::to_string(turn + 1);
      user.channel_kind = "webchat";
      out.push_back(user);
      int seq = 1;
      for (const auto& skill : s.bot_skills[turn]) {
        LogRecord bot = user;
        bot.direction = Direction::bot;
        bot.seq = seq++;
        bot.text = "response from " + skill;
        if (skill.empty()) {
          bot.skill.reset();
        } else {
          bot.skill = skill;
        }
        out.push_back(bot);
      }
      t += std::chrono::seconds(5);
    }
  }
  return out;
}

}  // namespace confassist::testing
