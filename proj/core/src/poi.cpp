#include "confassist/poi.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "confassist/error.hpp"
#include "confassist/templates.hpp"
#include "confassist/text.hpp"

namespace confassist {

namespace {

[[noreturn]] void bad_field(const std::string& id, const std::string& field,
                            const std::string& why) {
  throw Error(ErrorCode::schema_violation,
              "poi item '" + id + "' field '" + field + "': " + why);
}

bool contains(const std::vector<std::string>& list, const std::string& v) {
  return std::find(list.begin(), list.end(), v) != list.end();
}

}  // namespace

std::string_view to_string(PoiCategory category) {
  switch (category) {
    case PoiCategory::restaurant: return "restaurant";
    case PoiCategory::bar: return "bar";
    case PoiCategory::cafe: return "cafe";
    case PoiCategory::museum: return "museum";
    case PoiCategory::park: return "park";
    case PoiCategory::activity: return "activity";
  }
  return "restaurant";
}

std::optional<PoiCategory> poi_category_from_string(std::string_view name) {
  for (auto c : {PoiCategory::restaurant, PoiCategory::bar, PoiCategory::cafe,
                 PoiCategory::museum, PoiCategory::park, PoiCategory::activity}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(TransportMode mode) {
  switch (mode) {
    case TransportMode::walk: return "walk";
    case TransportMode::bus: return "bus";
    case TransportMode::taxi: return "taxi";
  }
  return "walk";
}

std::optional<TransportMode> transport_mode_from_string(std::string_view name) {
  if (name == "walk") return TransportMode::walk;
  if (name == "bus") return TransportMode::bus;
  if (name == "taxi") return TransportMode::taxi;
  return std::nullopt;
}

std::optional<PoiAspect> poi_aspect_from_string(std::string_view name) {
  if (name == "address") return PoiAspect::address;
  if (name == "price") return PoiAspect::price;
  if (name == "rating") return PoiAspect::rating;
  if (name == "description") return PoiAspect::description;
  return std::nullopt;
}

nlohmann::json to_json(const PoiItem& item) {
  nlohmann::json transport = nlohmann::json::array();
  for (const auto& t : item.transport_options) {
    transport.push_back({{"mode", to_string(t.mode)},
                         {"instructions", t.instructions},
                         {"duration_minutes", t.duration_minutes}});
  }
  return {{"id", item.id},
          {"name", item.name},
          {"category", to_string(item.category)},
          {"keywords", item.keywords},
          {"price_level", item.price_level},
          {"rating", item.rating},
          {"review_count", item.review_count},
          {"address", item.address},
          {"coordinates", {{"lat", item.lat}, {"lon", item.lon}}},
          {"transport_options", transport},
          {"description", item.description}};
}

PoiCatalog::PoiCatalog(std::vector<PoiItem> items) : items_(std::move(items)) {
  if (items_.empty()) {
    throw Error(ErrorCode::empty_collection, "empty-catalog: catalog has no items");
  }
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> names;
  for (const auto& item : items_) {
    if (item.id.empty()) bad_field("", "id", "must be non-empty");
    if (!ids.insert(item.id).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate poi item id '" + item.id + "'");
    }
    if (item.name.empty()) bad_field(item.id, "name", "must be non-empty");
    if (!names.insert(item.name).second) {
      throw Error(ErrorCode::duplicate_id,
                  "poi item '" + item.id + "' field 'name': duplicate name '" +
                      item.name + "'");
    }
    for (const auto& k : item.keywords) {
      if (k.empty() || k != to_lower(k)) {
        bad_field(item.id, "keywords", "'" + k + "' must be non-empty lowercase");
      }
    }
    if (item.price_level < 1 || item.price_level > 4) {
      bad_field(item.id, "price_level", "must be within 1-4");
    }
    if (!(item.rating >= 0.0 && item.rating <= 5.0)) {
      bad_field(item.id, "rating", "must be within 0-5");
    }
    if (item.review_count < 0) bad_field(item.id, "review_count", "must be >= 0");
    if (!(item.lat >= -90.0 && item.lat <= 90.0)) {
      bad_field(item.id, "coordinates.lat", "must be within [-90, 90]");
    }
    if (!(item.lon >= -180.0 && item.lon <= 180.0)) {
      bad_field(item.id, "coordinates.lon", "must be within [-180, 180]");
    }
    for (const auto& t : item.transport_options) {
      if (t.duration_minutes <= 0) {
        bad_field(item.id, "transport_options.duration_minutes", "must be positive");
      }
    }
  }
}

const PoiItem* PoiCatalog::find(std::string_view id) const {
  for (const auto& item : items_) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

PoiCatalog PoiCatalog::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("schema_version", 0) != 1) {
    throw Error(ErrorCode::invalid_document,
                "poi catalog must be an object with schema_version 1");
  }
  if (!doc.contains("items") || !doc.at("items").is_array()) {
    throw Error(ErrorCode::invalid_document, "poi catalog needs an 'items' list");
  }
  std::vector<PoiItem> items;
  for (const auto& j : doc.at("items")) {
    PoiItem item;
    item.id = j.value("id", std::string{});
    const auto field = [&](const char* name) -> const nlohmann::json& {
      if (!j.contains(name)) bad_field(item.id, name, "missing");
      return j.at(name);
    };
    try {
      item.name = field("name").get<std::string>();
      const auto category = field("category").get<std::string>();
      const auto parsed = poi_category_from_string(category);
      if (!parsed) bad_field(item.id, "category", "unknown category '" + category + "'");
      item.category = *parsed;
      for (const auto& k : j.value("keywords", nlohmann::json::array())) {
        item.keywords.insert(k.get<std::string>());
      }
      item.price_level = field("price_level").get<int>();
      item.rating = field("rating").get<double>();
      item.review_count = j.value("review_count", 0);
      item.address = j.value("address", std::string{});
      const auto& coords = field("coordinates");
      item.lat = coords.at("lat").get<double>();
      item.lon = coords.at("lon").get<double>();
      for (const auto& t : j.value("transport_options", nlohmann::json::array())) {
        TransportOption option;
        const auto mode = t.at("mode").get<std::string>();
        const auto parsed_mode = transport_mode_from_string(mode);
        if (!parsed_mode) {
          bad_field(item.id, "transport_options.mode", "unknown mode '" + mode + "'");
        }
        option.mode = *parsed_mode;
        option.instructions = t.value("instructions", std::string{});
        option.duration_minutes = t.at("duration_minutes").get<int>();
        item.transport_options.push_back(std::move(option));
      }
      item.description = j.value("description", std::string{});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::schema_violation,
                  "poi item '" + item.id + "': " + e.what());
    }
    items.push_back(std::move(item));
  }
  return PoiCatalog(std::move(items));
}

PoiCatalog PoiCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::not_found, "cannot open poi catalog '" + path + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::invalid_document, "poi catalog '" + path + "': " + e.what());
  }
}

void PoiPreferences::like(const std::string& keyword) {
  disliked.erase(std::remove(disliked.begin(), disliked.end(), keyword), disliked.end());
  if (!contains(liked, keyword)) liked.push_back(keyword);
}

void PoiPreferences::dislike(const std::string& keyword) {
  liked.erase(std::remove(liked.begin(), liked.end(), keyword), liked.end());
  if (!contains(disliked, keyword)) disliked.push_back(keyword);
}

void PoiPreferences::reject(const std::string& id) {
  if (accepted_id == id) accepted_id.reset();
  rejected_ids.insert(id);
}

void PoiPreferences::accept(const std::string& id) {
  rejected_ids.erase(id);
  accepted_id = id;
}

bool poi_ranks_before(const PoiItem& a, const PoiItem& b) {
  if (a.rating != b.rating) return a.rating > b.rating;
  if (a.review_count != b.review_count) return a.review_count > b.review_count;
  return a.name < b.name;
}

std::vector<const PoiItem*> poi_candidates(const PoiCatalog& catalog,
                                           const PoiPreferences& prefs) {
  std::vector<const PoiItem*> out;
  for (const auto& item : catalog.items()) {
    if (prefs.category && item.category != *prefs.category) continue;
    if (prefs.rejected_ids.count(item.id)) continue;
    const auto has = [&](const std::string& k) { return item.keywords.count(k) != 0; };
    if (!prefs.liked.empty() && std::none_of(prefs.liked.begin(), prefs.liked.end(), has)) {
      continue;
    }
    if (std::any_of(prefs.disliked.begin(), prefs.disliked.end(), has)) continue;
    out.push_back(&item);
  }
  std::sort(out.begin(), out.end(),
            [](const PoiItem* a, const PoiItem* b) { return poi_ranks_before(*a, *b); });
  return out;
}

const PoiItem* recommend(const PoiCatalog& catalog, const PoiPreferences& prefs) {
  const auto candidates = poi_candidates(catalog, prefs);
  return candidates.empty() ? nullptr : candidates.front();
}

std::string price_glyphs(int price_level) {
  return std::string(static_cast<std::size_t>(std::clamp(price_level, 1, 4)), '$');
}

std::string format_rating(double rating) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", rating);
  return buf;
}

std::string aspect_answer(const PoiItem& item, PoiAspect aspect) {
  switch (aspect) {
    case PoiAspect::address: return item.address;
    case PoiAspect::price: return price_glyphs(item.price_level);
    case PoiAspect::rating: return format_rating(item.rating);
    case PoiAspect::description: return item.description;
  }
  return {};
}

const TransportOption* choose_transport(const PoiItem& item,
                                        std::optional<TransportMode> mode) {
  if (mode) {
    for (const auto& option : item.transport_options) {
      if (option.mode == *mode) return &option;
    }
  }
  const TransportOption* best = nullptr;
  for (const auto& option : item.transport_options) {
    if (best == nullptr || option.duration_minutes < best->duration_minutes ||
        (option.duration_minutes == best->duration_minutes && option.mode < best->mode)) {
      best = &option;
    }
  }
  return best;
}

std::string static_map_ref(const std::string& url_template, double lat, double lon) {
  char la[32];
  char lo[32];
  std::snprintf(la, sizeof la, "%.5f", lat);
  std::snprintf(lo, sizeof lo, "%.5f", lon);
  return substitute(url_template, {{"lat", la}, {"lon", lo}});
}

}  // namespace confassist
