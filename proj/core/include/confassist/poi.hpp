#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace confassist {

enum class PoiCategory { restaurant, bar, cafe, museum, park, activity };
enum class TransportMode { walk, bus, taxi };

std::string_view to_string(PoiCategory category);
std::optional<PoiCategory> poi_category_from_string(std::string_view name);
std::string_view to_string(TransportMode mode);
std::optional<TransportMode> transport_mode_from_string(std::string_view name);

struct TransportOption {
  TransportMode mode = TransportMode::walk;
  std::string instructions;
  int duration_minutes = 1;

  bool operator==(const TransportOption&) const = default;
};

struct PoiItem {
  std::string id;
  std::string name;
  PoiCategory category = PoiCategory::restaurant;
  std::set<std::string> keywords;
  int price_level = 1;
  double rating = 0.0;
  int review_count = 0;
  std::string address;
  double lat = 0.0;
  double lon = 0.0;
  std::vector<TransportOption> transport_options;
  std::string description;

  bool operator==(const PoiItem&) const = default;
};

nlohmann::json to_json(const PoiItem& item);

class PoiCatalog {
 public:
  // Validates every item; throws Error naming the item id and field.
  explicit PoiCatalog(std::vector<PoiItem> items);

  const std::vector<PoiItem>& items() const { return items_; }
  const PoiItem* find(std::string_view id) const;
  std::size_t size() const { return items_.size(); }

  // {"schema_version": 1, "items": [...]}
  static PoiCatalog from_json(const nlohmann::json& doc);
  static PoiCatalog load(const std::string& path);

 private:
  std::vector<PoiItem> items_;
};

// Keyword preference state. Liked and disliked stay disjoint: the latest
// statement about a keyword wins.
struct PoiPreferences {
  std::optional<PoiCategory> category;
  std::vector<std::string> liked;
  std::vector<std::string> disliked;
  std::set<std::string> rejected_ids;
  std::optional<std::string> accepted_id;

  void like(const std::string& keyword);
  void dislike(const std::string& keyword);
  void reject(const std::string& id);
  void accept(const std::string& id);
};

// Items passing the filters, best first: matching category (any category
// when unset), at least one liked keyword when liked is non-empty, no
// disliked keyword, not rejected. Ordered by rating desc, review_count
// desc, name asc.
std::vector<const PoiItem*> poi_candidates(const PoiCatalog& catalog,
                                           const PoiPreferences& prefs);

const PoiItem* recommend(const PoiCatalog& catalog, const PoiPreferences& prefs);

// Ordering used by recommend; true when a ranks before b.
bool poi_ranks_before(const PoiItem& a, const PoiItem& b);

enum class PoiAspect { address, price, rating, description };
std::optional<PoiAspect> poi_aspect_from_string(std::string_view name);

std::string price_glyphs(int price_level);
std::string format_rating(double rating);

// Plain-text answer for one aspect of an item.
std::string aspect_answer(const PoiItem& item, PoiAspect aspect);

// The requested mode when the item offers it, otherwise the fastest option
// (ties: walk, bus, taxi). Null when the item has no options.
const TransportOption* choose_transport(const PoiItem& item,
                                        std::optional<TransportMode> mode);

// Expands "{lat}" and "{lon}" (5 decimals) in a static map URL template.
std::string static_map_ref(const std::string& url_template, double lat, double lon);

}  // namespace confassist
