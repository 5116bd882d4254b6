#include "confassist/templates.hpp"

#include "confassist/error.hpp"

namespace confassist {

std::string substitute(const std::string& text, const Bindings& bindings) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const auto close = text.find('}', i + 1);
      if (close != std::string::npos) {
        const auto key = text.substr(i + 1, close - i - 1);
        if (auto it = bindings.find(key); it != bindings.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

void TemplateCatalog::add(std::string id, std::vector<TemplateVariant> variants) {
  if (id.empty()) {
    throw Error(ErrorCode::schema_violation, "template with empty id");
  }
  if (variants.empty()) {
    throw Error(ErrorCode::schema_violation, "template '" + id + "' has no variants");
  }
  for (const auto& v : variants) {
    if (v.text.empty()) {
      throw Error(ErrorCode::schema_violation,
                  "template '" + id + "' has an empty variant");
    }
    if (v.quick_replies.size() > 6) {
      throw Error(ErrorCode::schema_violation,
                  "template '" + id + "' has more than 6 quick replies");
    }
  }
  if (!templates_.emplace(id, std::move(variants)).second) {
    throw Error(ErrorCode::duplicate_id, "duplicate template '" + id + "'");
  }
}

bool TemplateCatalog::contains(const std::string& id) const {
  return templates_.count(id) != 0;
}

std::size_t TemplateCatalog::variant_count(const std::string& id) const {
  const auto it = templates_.find(id);
  return it == templates_.end() ? 0 : it->second.size();
}

ResponsePayload TemplateCatalog::render(const std::string& id, std::size_t use_count,
                                        const Bindings& bindings) const {
  const auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw Error(ErrorCode::not_found, "unknown template '" + id + "'");
  }
  const auto& variant = it->second[use_count % it->second.size()];
  std::string text = substitute(variant.text, bindings);
  if (variant.quick_replies.empty()) return TextPayload{std::move(text)};
  std::vector<std::string> options;
  options.reserve(variant.quick_replies.size());
  for (const auto& o : variant.quick_replies) options.push_back(substitute(o, bindings));
  return QuickReplies{std::move(text), std::move(options)};
}

TemplateCatalog TemplateCatalog::from_json(const nlohmann::json& doc) {
  TemplateCatalog catalog;
  if (!doc.is_object()) {
    throw Error(ErrorCode::invalid_document, "templates must be an object");
  }
  for (const auto& [id, list] : doc.items()) {
    std::vector<TemplateVariant> variants;
    const auto push = [&](const nlohmann::json& v) {
      if (v.is_string()) {
        variants.push_back({v.get<std::string>(), {}});
      } else {
        variants.push_back({v.at("text").get<std::string>(),
                            v.value("quick_replies", std::vector<std::string>{})});
      }
    };
    try {
      if (list.is_array()) {
        for (const auto& v : list) push(v);
      } else {
        push(list);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::invalid_document,
                  "template '" + id + "': " + e.what());
    }
    catalog.add(id, std::move(variants));
  }
  return catalog;
}

}  // namespace confassist
