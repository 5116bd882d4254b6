#include "confassist/nlu.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "confassist/error.hpp"
#include "confassist/text.hpp"

namespace confassist {

namespace {

std::vector<std::string> tokenize_pattern(std::string_view pattern) {
  std::vector<std::string> out;
  std::istringstream in{std::string(pattern)};
  std::string word;
  while (in >> word) {
    if (word == "*") {
      out.push_back("*");
      continue;
    }
    for (auto& t : tokenize(word)) out.push_back(std::move(t));
  }
  return out;
}

bool match_from(const std::vector<std::string>& pattern, std::size_t p,
                const std::vector<std::string>& tokens, std::size_t t) {
  if (p == pattern.size()) return t == tokens.size();
  if (pattern[p] == "*") {
    for (std::size_t next = t + 1; next <= tokens.size(); ++next) {
      if (match_from(pattern, p + 1, tokens, next)) return true;
    }
    return false;
  }
  return t < tokens.size() && tokens[t] == pattern[p] &&
         match_from(pattern, p + 1, tokens, t + 1);
}

}  // namespace

std::vector<std::string> NluResult::values(std::string_view entity_type) const {
  std::vector<std::string> out;
  for (const auto& e : entities) {
    if (e.entity_type == entity_type) out.push_back(e.value);
  }
  return out;
}

double jaccard(const TokenSet& a, const TokenSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

bool pattern_matches(const std::vector<std::string>& pattern,
                     const std::vector<std::string>& tokens) {
  return match_from(pattern, 0, tokens, 0);
}

NluModel NluModel::compile(std::vector<IntentSpec> specs,
                           std::vector<Gazetteer> gazetteers, double threshold) {
  if (specs.empty()) {
    throw Error(ErrorCode::empty_collection, "intent list is empty");
  }
  if (threshold < 0.0 || threshold > 1.0) {
    throw Error(ErrorCode::schema_violation, "threshold must be within [0, 1]");
  }
  NluModel model;
  model.threshold_ = threshold;

  std::unordered_set<std::string> names;
  std::map<TokenSet, std::string> example_owner;
  for (const auto& spec : specs) {
    if (spec.name.empty()) {
      throw Error(ErrorCode::schema_violation, "intent with empty name");
    }
    if (spec.name == kOutOfScope) {
      throw Error(ErrorCode::reserved_name,
                  "intent name '" + spec.name + "' is reserved");
    }
    if (!names.insert(spec.name).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate intent '" + spec.name + "'");
    }
    if (spec.examples.empty() && spec.patterns.empty()) {
      throw Error(ErrorCode::schema_violation,
                  "intent '" + spec.name + "' has no examples or patterns");
    }
    CompiledIntent compiled;
    for (const auto& example : spec.examples) {
      auto tokens = tokenize(example);
      if (tokens.empty()) {
        throw Error(ErrorCode::schema_violation,
                    "intent '" + spec.name + "' has an empty example");
      }
      TokenSet set(tokens.begin(), tokens.end());
      auto [it, inserted] = example_owner.emplace(set, spec.name);
      if (!inserted && it->second != spec.name) {
        throw Error(ErrorCode::duplicate_id,
                    "example '" + example + "' of intent '" + spec.name +
                        "' duplicates an example of '" + it->second + "'");
      }
      compiled.examples.push_back(std::move(set));
    }
    for (const auto& pattern : spec.patterns) {
      auto tokens = tokenize_pattern(pattern);
      if (tokens.empty()) {
        throw Error(ErrorCode::schema_violation,
                    "intent '" + spec.name + "' has an empty pattern");
      }
      compiled.patterns.push_back(std::move(tokens));
    }
    model.compiled_.push_back(std::move(compiled));
  }

  std::unordered_set<std::string> types;
  for (std::size_t g = 0; g < gazetteers.size(); ++g) {
    const auto& gaz = gazetteers[g];
    if (gaz.entity_type.empty()) {
      throw Error(ErrorCode::schema_violation, "gazetteer with empty entity_type");
    }
    if (!types.insert(gaz.entity_type).second) {
      throw Error(ErrorCode::duplicate_id,
                  "duplicate gazetteer '" + gaz.entity_type + "'");
    }
    std::set<std::vector<std::string>> seen;
    for (const auto& [surface, value] : gaz.entries) {
      auto tokens = tokenize(surface);
      if (tokens.empty()) {
        throw Error(ErrorCode::schema_violation,
                    "gazetteer '" + gaz.entity_type + "' has an empty surface form");
      }
      if (!seen.insert(tokens).second) {
        throw Error(ErrorCode::duplicate_id, "gazetteer '" + gaz.entity_type +
                                                 "' lists surface form '" +
                                                 surface + "' twice");
      }
      const std::string first = tokens.front();
      model.entries_by_first_token_[first].push_back(
          CompiledEntry{std::move(tokens), value, g});
    }
  }
  for (auto& [first, entries] : model.entries_by_first_token_) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const CompiledEntry& a, const CompiledEntry& b) {
                       if (a.tokens.size() != b.tokens.size()) {
                         return a.tokens.size() > b.tokens.size();
                       }
                       return a.gazetteer_index < b.gazetteer_index;
                     });
  }

  model.specs_ = std::move(specs);
  model.gazetteers_ = std::move(gazetteers);
  return model;
}

NluModel NluModel::with_threshold(double threshold) const {
  if (threshold < 0.0 || threshold > 1.0) {
    throw Error(ErrorCode::schema_violation, "threshold must be within [0, 1]");
  }
  NluModel copy = *this;
  copy.threshold_ = threshold;
  return copy;
}

bool NluModel::has_intent(std::string_view name) const {
  return std::any_of(specs_.begin(), specs_.end(),
                     [&](const IntentSpec& s) { return s.name == name; });
}

double NluModel::score_intent(std::size_t index,
                              const std::vector<std::string>& tokens,
                              const TokenSet& set) const {
  const auto& intent = compiled_[index];
  for (const auto& pattern : intent.patterns) {
    if (pattern_matches(pattern, tokens)) return 1.0;
  }
  double best = 0.0;
  for (const auto& example : intent.examples) {
    best = std::max(best, jaccard(set, example));
  }
  return best;
}

std::map<std::string, double> NluModel::scores(std::string_view text) const {
  const auto tokens = tokenize(text);
  const TokenSet set(tokens.begin(), tokens.end());
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    out[specs_[i].name] = set.empty() ? 0.0 : score_intent(i, tokens, set);
  }
  return out;
}

NluResult NluModel::classify(std::string_view text) const {
  NluResult result;
  result.text = std::string(text);
  const auto tokens = tokenize(text);
  result.entities = extract(tokens);

  const TokenSet set(tokens.begin(), tokens.end());
  double best = 0.0;
  const IntentSpec* winner = nullptr;
  if (!set.empty()) {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      const double score = score_intent(i, tokens, set);
      const IntentSpec& spec = specs_[i];
      const bool better =
          winner == nullptr || score > best ||
          (score == best && (spec.priority > winner->priority ||
                             (spec.priority == winner->priority &&
                              spec.name < winner->name)));
      if (better) {
        best = score;
        winner = &spec;
      }
    }
  }

  result.confidence = best;
  if (winner == nullptr || best <= 0.0 || best < threshold_) {
    result.intent = std::string(kOutOfScope);
    result.is_fallback = true;
  } else {
    result.intent = winner->name;
  }
  return result;
}

std::vector<Entity> NluModel::extract_entities(std::string_view text) const {
  return extract(tokenize(text));
}

std::vector<Entity> NluModel::extract(const std::vector<std::string>& tokens) const {
  std::vector<Entity> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto it = entries_by_first_token_.find(tokens[i]);
    const CompiledEntry* match = nullptr;
    if (it != entries_by_first_token_.end()) {
      for (const auto& entry : it->second) {
        if (i + entry.tokens.size() <= tokens.size() &&
            std::equal(entry.tokens.begin(), entry.tokens.end(),
                       tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
          match = &entry;
          break;
        }
      }
    }
    if (match == nullptr) {
      ++i;
      continue;
    }
    out.push_back(Entity{gazetteers_[match->gazetteer_index].entity_type,
                         match->value, i, i + match->tokens.size()});
    i += match->tokens.size();
  }
  return out;
}

IntentCorpus parse_corpus(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("schema_version", 0) != 1) {
    throw Error(ErrorCode::invalid_document,
                "intent corpus must be an object with schema_version 1");
  }
  IntentCorpus corpus;
  try {
    for (const auto& item : doc.at("intents")) {
      IntentSpec spec;
      spec.name = item.at("name").get<std::string>();
      spec.examples = item.value("examples", std::vector<std::string>{});
      spec.patterns = item.value("patterns", std::vector<std::string>{});
      spec.priority = item.value("priority", 0);
      corpus.intents.push_back(std::move(spec));
    }
    for (const auto& item : doc.value("gazetteers", nlohmann::json::array())) {
      Gazetteer gaz;
      gaz.entity_type = item.at("entity_type").get<std::string>();
      const auto& entries = item.at("entries");
      if (entries.is_object()) {
        for (const auto& [surface, value] : entries.items()) {
          gaz.entries.emplace_back(surface, value.get<std::string>());
        }
      } else {
        // List form keeps document order: [{"surface": ..., "value": ...}].
        for (const auto& e : entries) {
          gaz.entries.emplace_back(e.at("surface").get<std::string>(),
                                   e.at("value").get<std::string>());
        }
      }
      corpus.gazetteers.push_back(std::move(gaz));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_document,
                std::string("intent corpus: ") + e.what());
  }
  return corpus;
}

IntentCorpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::not_found, "cannot open intent corpus '" + path + "'");
  }
  try {
    return parse_corpus(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::invalid_document,
                "intent corpus '" + path + "': " + e.what());
  }
}

}  // namespace confassist
