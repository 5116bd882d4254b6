#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace confassist::testing::oracle {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  for (const char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '\'') continue;
    if (std::isalnum(u)) {
      word += static_cast<char>(std::tolower(u));
    } else if (!word.empty()) {
      out.push_back(word);
      word.clear();
    }
  }
  if (!word.empty()) out.push_back(word);
  return out;
}

double jaccard(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  int both = 0;
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) ++both;
  }
  const int either = static_cast<int>(a.size() + b.size()) - both;
  return either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
}

bool wildcard_match(const std::vector<std::string>& pattern,
                    const std::vector<std::string>& tokens) {
  const auto P = pattern.size();
  const auto T = tokens.size();
  // ok[i][j]: pattern[0..i) matches tokens[0..j)
  std::vector<std::vector<bool>> ok(P + 1, std::vector<bool>(T + 1, false));
  ok[0][0] = true;
  for (std::size_t i = 1; i <= P; ++i) {
    for (std::size_t j = 1; j <= T; ++j) {
      if (pattern[i - 1] == "*") {
        for (std::size_t k = 0; k < j; ++k) {
          if (ok[i - 1][k]) ok[i][j] = true;
        }
      } else {
        ok[i][j] = ok[i - 1][j - 1] && pattern[i - 1] == tokens[j - 1];
      }
    }
  }
  return ok[P][T];
}

namespace {

std::vector<std::string> pattern_tokens(const std::string& pattern) {
  std::vector<std::string> out;
  std::istringstream in(pattern);
  std::string word;
  while (in >> word) {
    if (word == "*") {
      out.push_back(word);
    } else {
      for (auto& t : tokenize(word)) out.push_back(t);
    }
  }
  return out;
}

}  // namespace

Nlu::Nlu(IntentCorpus corpus, double threshold)
    : corpus_(std::move(corpus)), threshold_(threshold) {}

double Nlu::score(const IntentSpec& spec, const std::vector<std::string>& tokens) const {
  for (const auto& p : spec.patterns) {
    if (wildcard_match(pattern_tokens(p), tokens)) return 1.0;
  }
  double best = 0.0;
  for (const auto& e : spec.examples) best = std::max(best, jaccard(tokens, tokenize(e)));
  return best;
}

std::vector<Entity> Nlu::entities(const std::vector<std::string>& tokens) const {
  std::vector<Entity> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool found = false;
    for (std::size_t len = tokens.size() - i; len >= 1 && !found; --len) {
      const std::vector<std::string> span(tokens.begin() + i, tokens.begin() + i + len);
      for (const auto& g : corpus_.gazetteers) {
        for (const auto& [surface, value] : g.entries) {
          if (tokenize(surface) == span) {
            out.push_back({g.entity_type, value, i, i + len});
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) i += len;
    }
    if (!found) ++i;
  }
  return out;
}

Classification Nlu::classify(std::string_view text) const {
  const auto tokens = tokenize(text);
  Classification c;
  c.entities = entities(tokens);
  std::vector<std::tuple<double, int, std::string>> scored;
  if (!tokens.empty()) {
    for (const auto& spec : corpus_.intents) {
      scored.emplace_back(score(spec, tokens), spec.priority, spec.name);
    }
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });
  if (scored.empty() || std::get<0>(scored.front()) < threshold_ ||
      std::get<0>(scored.front()) == 0.0) {
    c.intent = "out_of_scope";
    c.fallback = true;
    c.confidence = scored.empty() ? 0.0 : std::get<0>(scored.front());
  } else {
    c.intent = std::get<2>(scored.front());
    c.confidence = std::get<0>(scored.front());
  }
  return c;
}

std::optional<std::string> recommend_poi(const std::vector<PoiItem>& items,
                                         const PoiPreferences& prefs) {
  std::vector<PoiItem> pool;
  for (const auto& item : items) {
    if (prefs.category && item.category != *prefs.category) continue;
    if (prefs.rejected_ids.count(item.id)) continue;
    bool any_liked = prefs.liked.empty();
    for (const auto& k : prefs.liked) any_liked = any_liked || item.keywords.count(k) > 0;
    if (!any_liked) continue;
    bool any_disliked = false;
    for (const auto& k : prefs.disliked) any_disliked = any_disliked || item.keywords.count(k) > 0;
    if (any_disliked) continue;
    pool.push_back(item);
  }
  if (pool.empty()) return std::nullopt;
  std::sort(pool.begin(), pool.end(), [](const PoiItem& a, const PoiItem& b) {
    return std::make_tuple(-a.rating, -a.review_count, a.name) <
           std::make_tuple(-b.rating, -b.review_count, b.name);
  });
  return pool.front().id;
}

std::optional<TransportOption> choose_transport(const PoiItem& item,
                                                std::optional<TransportMode> mode) {
  if (mode) {
    for (const auto& o : item.transport_options) {
      if (o.mode == *mode) return o;
    }
  }
  std::optional<TransportOption> best;
  for (const auto& o : item.transport_options) {
    if (!best || o.duration_minutes < best->duration_minutes ||
        (o.duration_minutes == best->duration_minutes &&
         static_cast<int>(o.mode) < static_cast<int>(best->mode))) {
      best = o;
    }
  }
  return best;
}

std::set<std::string> event_topics(const ConferenceEvent& raw) {
  std::set<std::string> topics(raw.topics.begin(), raw.topics.end());
  for (const auto& t : tokenize(raw.title)) topics.insert(t);
  for (const auto& t : tokenize(raw.abstract)) topics.insert(t);
  return topics;
}

std::optional<std::string> recommend_session(const std::vector<ConferenceEvent>& raw,
                                             const std::vector<std::string>& interests,
                                             const std::set<std::string>& recommended,
                                             Instant now) {
  struct Scored {
    double score;
    Instant start;
    std::string id;
  };
  std::vector<Scored> pool;
  for (const auto& e : raw) {
    const bool kind_ok = e.kind == EventKind::session || e.kind == EventKind::tutorial ||
                         e.kind == EventKind::workshop;
    if (!kind_ok || !(e.end > now) || recommended.count(e.id)) continue;
    const auto topics = event_topics(e);
    const double s = jaccard({topics.begin(), topics.end()}, interests);
    if (s > 0.0) pool.push_back({s, e.start, e.id});
  }
  if (pool.empty()) return std::nullopt;
  std::sort(pool.begin(), pool.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.start != b.start) return a.start < b.start;
    return a.id < b.id;
  });
  return pool.front().id;
}

std::optional<std::string> next_session(const std::vector<ConferenceEvent>& raw, Instant now) {
  std::optional<std::pair<Instant, std::string>> best;
  for (const auto& e : raw) {
    if (!(e.start > now)) continue;
    const std::pair<Instant, std::string> key{e.start, e.id};
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  return best->second;
}

}  // namespace confassist::testing::oracle
