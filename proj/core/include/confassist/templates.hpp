#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "confassist/response.hpp"

namespace confassist {

using Bindings = std::map<std::string, std::string>;

struct TemplateVariant {
  std::string text;
  // When non-empty the variant renders as QuickReplies(text, options).
  std::vector<std::string> quick_replies;
};

// Response templates keyed by id. Placeholders are written "{name}" and are
// substituted from the bindings; unbound placeholders are left verbatim.
class TemplateCatalog {
 public:
  void add(std::string id, std::vector<TemplateVariant> variants);
  bool contains(const std::string& id) const;
  std::size_t variant_count(const std::string& id) const;

  // Renders variant (use_count mod variant_count). Throws Error(not_found).
  ResponsePayload render(const std::string& id, std::size_t use_count,
                         const Bindings& bindings) const;

  const std::map<std::string, std::vector<TemplateVariant>>& all() const {
    return templates_;
  }

  static TemplateCatalog from_json(const nlohmann::json& doc);

 private:
  std::map<std::string, std::vector<TemplateVariant>> templates_;
};

std::string substitute(const std::string& text, const Bindings& bindings);

}  // namespace confassist
