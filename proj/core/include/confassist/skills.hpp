#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "confassist/session.hpp"
#include "confassist/templates.hpp"

namespace confassist {

class ProfileStore;
struct UserProfile;

// What a skill sees and may do during one invocation. Every effect is
// recorded as a session event by the dialogue engine.
class TurnContext {
 public:
  virtual ~TurnContext() = default;

  virtual const Session& session() const = 0;
  virtual const NluResult& nlu() const = 0;
  virtual Instant now() const = 0;
  // Arguments of an out-of-turn operation (identify, consent); empty object
  // during ordinary user turns.
  virtual const nlohmann::json& params() const = 0;

  virtual void say(const std::string& template_id, const Bindings& bindings = {}) = 0;
  virtual void reply(ResponsePayload payload) = 0;
  virtual void set_slot(const std::string& name, SlotValue value, bool append = false) = 0;
  virtual void clear_slot(const std::string& name) = 0;
  virtual void activate_form(const std::string& name) = 0;
  virtual void deactivate_form() = 0;

  virtual ProfileStore* profiles() = 0;
  // The bound profile when its consent is granted, otherwise none.
  virtual std::optional<UserProfile> consented_user() const = 0;
};

class Skill {
 public:
  virtual ~Skill() = default;
  virtual std::string name() const = 0;
  virtual std::set<std::string> claimed_intents() const = 0;
  // Templates the skill renders; checked against the catalog at boot.
  virtual std::vector<std::string> required_templates() const { return {}; }
  // `operation` is empty when the skill is routed by intent alone.
  virtual void handle(TurnContext& ctx, std::string_view operation) = 0;
};

struct SkillDescriptor {
  std::string name;
  std::set<std::string> claimed_intents;
  std::shared_ptr<Skill> handler;

  static SkillDescriptor of(std::shared_ptr<Skill> skill);
};

inline constexpr std::string_view kCoreSkill = "core";

class SkillRegistry {
 public:
  // Boot phase only. Throws on a duplicate skill name or an intent that is
  // already claimed by another skill.
  void register_skill(SkillDescriptor descriptor);
  bool unregister(const std::string& name);

  // Owner of the intent. out_of_scope and unclaimed intents go to the core
  // skill; unclaimed ones also log a warning. Throws if core is missing.
  const SkillDescriptor& route(std::string_view intent) const;
  bool claims(std::string_view intent) const;

  const SkillDescriptor* find(std::string_view name) const;
  const std::vector<SkillDescriptor>& skills() const { return skills_; }
  const std::map<std::string, std::string, std::less<>>& routing_table() const {
    return owner_;
  }

 private:
  std::vector<SkillDescriptor> skills_;
  std::map<std::string, std::string, std::less<>> owner_;
};

}  // namespace confassist
