#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace confassist {

inline constexpr std::string_view kOutOfScope = "out_of_scope";
inline constexpr double kDefaultThreshold = 0.3;

struct IntentSpec {
  std::string name;
  std::vector<std::string> examples;
  // Whole-utterance token patterns; "*" matches one or more tokens.
  std::vector<std::string> patterns;
  int priority = 0;
};

struct Gazetteer {
  std::string entity_type;
  // Surface form -> canonical value, in document order.
  std::vector<std::pair<std::string, std::string>> entries;
};

struct Entity {
  std::string entity_type;
  std::string value;
  std::size_t start = 0;  // token index, inclusive
  std::size_t end = 0;    // token index, exclusive

  bool operator==(const Entity&) const = default;
};

struct NluResult {
  std::string text;
  std::string intent;
  double confidence = 0.0;
  std::vector<Entity> entities;
  bool is_fallback = false;

  bool operator==(const NluResult&) const = default;

  // Canonical values of all entities of one type, in order of appearance.
  std::vector<std::string> values(std::string_view entity_type) const;
};

using TokenSet = std::set<std::string>;

double jaccard(const TokenSet& a, const TokenSet& b);

// Compiled, immutable intent classifier and entity extractor. Safe for
// concurrent use once constructed.
class NluModel {
 public:
  static NluModel compile(std::vector<IntentSpec> specs,
                          std::vector<Gazetteer> gazetteers,
                          double threshold = kDefaultThreshold);

  NluResult classify(std::string_view text) const;
  std::vector<Entity> extract_entities(std::string_view text) const;

  double threshold() const { return threshold_; }
  NluModel with_threshold(double threshold) const;

  const std::vector<IntentSpec>& intents() const { return specs_; }
  const std::vector<Gazetteer>& gazetteers() const { return gazetteers_; }
  bool has_intent(std::string_view name) const;

  // Per-intent scores before thresholding; exposed for diagnostics.
  std::map<std::string, double> scores(std::string_view text) const;

 private:
  struct CompiledIntent {
    std::vector<TokenSet> examples;
    std::vector<std::vector<std::string>> patterns;
  };
  struct CompiledEntry {
    std::vector<std::string> tokens;
    std::string value;
    std::size_t gazetteer_index;
  };

  NluModel() = default;
  double score_intent(std::size_t index, const std::vector<std::string>& tokens,
                      const TokenSet& set) const;
  std::vector<Entity> extract(const std::vector<std::string>& tokens) const;

  std::vector<IntentSpec> specs_;
  std::vector<CompiledIntent> compiled_;
  std::vector<Gazetteer> gazetteers_;
  // First token -> candidate entries, longest first then gazetteer order.
  std::map<std::string, std::vector<CompiledEntry>> entries_by_first_token_;
  double threshold_ = kDefaultThreshold;
};

// Matches a tokenized pattern against a token sequence, anchored at both ends.
bool pattern_matches(const std::vector<std::string>& pattern,
                     const std::vector<std::string>& tokens);

// Intent corpus document: {"schema_version": 1, "intents": [...],
// "gazetteers": [...]}.
struct IntentCorpus {
  std::vector<IntentSpec> intents;
  std::vector<Gazetteer> gazetteers;
};

IntentCorpus parse_corpus(const nlohmann::json& doc);
IntentCorpus load_corpus(const std::string& path);

}  // namespace confassist
