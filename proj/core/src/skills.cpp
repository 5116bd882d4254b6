#include "confassist/skills.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "confassist/error.hpp"

namespace confassist {

SkillDescriptor SkillDescriptor::of(std::shared_ptr<Skill> skill) {
  SkillDescriptor d;
  d.name = skill->name();
  d.claimed_intents = skill->claimed_intents();
  d.handler = std::move(skill);
  return d;
}

void SkillRegistry::register_skill(SkillDescriptor descriptor) {
  if (descriptor.name.empty() || !descriptor.handler) {
    throw Error(ErrorCode::schema_violation, "skill needs a name and a handler");
  }
  if (find(descriptor.name) != nullptr) {
    throw Error(ErrorCode::duplicate_id, "skill '" + descriptor.name +
                                             "' is already registered");
  }
  for (const auto& intent : descriptor.claimed_intents) {
    if (intent == kOutOfScope) {
      throw Error(ErrorCode::reserved_name, "skill '" + descriptor.name +
                                                "' claims reserved intent '" +
                                                intent + "'");
    }
    if (const auto it = owner_.find(intent); it != owner_.end()) {
      throw Error(ErrorCode::duplicate_id,
                  "intent '" + intent + "' claimed by both '" + it->second +
                      "' and '" + descriptor.name + "'");
    }
  }
  for (const auto& intent : descriptor.claimed_intents) {
    owner_.emplace(intent, descriptor.name);
  }
  skills_.push_back(std::move(descriptor));
}

bool SkillRegistry::unregister(const std::string& name) {
  const auto it = std::find_if(skills_.begin(), skills_.end(),
                               [&](const SkillDescriptor& d) { return d.name == name; });
  if (it == skills_.end()) return false;
  for (const auto& intent : it->claimed_intents) owner_.erase(intent);
  skills_.erase(it);
  return true;
}

const SkillDescriptor* SkillRegistry::find(std::string_view name) const {
  for (const auto& d : skills_) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

bool SkillRegistry::claims(std::string_view intent) const {
  return owner_.find(intent) != owner_.end();
}

const SkillDescriptor& SkillRegistry::route(std::string_view intent) const {
  if (const auto it = owner_.find(intent); it != owner_.end()) {
    return *find(it->second);
  }
  const SkillDescriptor* core = find(kCoreSkill);
  if (core == nullptr) {
    throw Error(ErrorCode::invalid_reference, "no core skill registered");
  }
  if (intent != kOutOfScope) {
    spdlog::warn("intent '{}' has no owning skill; routing to core fallback", intent);
  }
  return *core;
}

}  // namespace confassist
