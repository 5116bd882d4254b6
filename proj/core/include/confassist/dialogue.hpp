#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "confassist/ids.hpp"
#include "confassist/nlu.hpp"
#include "confassist/session.hpp"
#include "confassist/skills.hpp"
#include "confassist/templates.hpp"

namespace confassist {

class ProfileStore;
class LogSink;

struct SayTemplate {
  std::string template_id;
  Bindings bindings;
};
struct InvokeSkill {
  std::string skill;
  std::string operation;
};
struct SetSlot {
  std::string name;
  SlotValue value;
};
struct ActivateForm {
  std::string name;
};
struct DeactivateForm {};

using Action = std::variant<SayTemplate, InvokeSkill, SetSlot, ActivateForm, DeactivateForm>;

std::string describe(const Action& action);

struct SlotPredicate {
  std::string slot;
  std::optional<std::string> equals;  // compared against the slot's text form
  std::optional<bool> present;

  bool matches(const Session& session) const;
};

inline constexpr std::string_view kAnyForm = "any";
inline constexpr std::string_view kNoForm = "none";

struct Rule {
  std::string id;
  std::string when_intent;
  // "any" (default), "none" (no form active) or the name of a form that
  // must be active.
  std::string when_form{kAnyForm};
  std::vector<SlotPredicate> when_slots;
  std::vector<Action> actions;
  int priority = 0;

  bool matches(const Session& session, const NluResult& nlu) const;
};

struct SlotMapping {
  enum class Kind { entity, intent };
  Kind kind = Kind::entity;
  std::string entity_type;               // Kind::entity
  std::vector<std::string> intents;      // entity: only for these; intent: trigger
  std::vector<std::string> not_intents;  // entity: never for these intents
  SlotValue value;                       // Kind::intent
  std::string target;                    // slot written; empty = the form slot

  bool applies_to(const NluResult& nlu) const;
};

struct RequiredSlot {
  std::string name;
  std::string prompt;  // template id
  std::vector<SlotMapping> mappings;
  // Answering this slot's prompt also settles these slots: any of them
  // still unset afterwards is set to an empty list. Prefill at form
  // activation does not count as an answer.
  std::vector<std::string> completes;

  // The form slot plus every distinct mapping target.
  std::vector<std::string> targets() const;
  // Filled once any of its targets holds a value.
  bool filled(const Session& session) const;
};

struct Form {
  std::string name;
  std::string skill;  // attribution for prompts
  std::vector<RequiredSlot> required_slots;
  Action on_complete;

  const RequiredSlot* next_unfilled(const Session& session) const;
};

struct SlotSpec {
  std::string name;
  bool is_list = false;
  // Appending a value here removes it from that list slot.
  std::string exclusive_with;
};

struct DialogueConfig {
  TemplateCatalog templates;
  std::vector<Rule> rules;
  std::vector<Form> forms;
  std::vector<SlotSpec> slots;

  const Form* find_form(std::string_view name) const;
  const SlotSpec* find_slot(std::string_view name) const;

  static DialogueConfig from_json(const nlohmann::json& doc);
  static DialogueConfig load(const std::string& path);
};

struct PolicyDecision {
  enum class Source { rule, form, fallback };
  Source source = Source::fallback;
  std::string rule_id;  // set when source == rule
  std::vector<Action> actions;
};

// Templates the engine itself renders.
inline constexpr std::string_view kApologyTemplate = "apology";
inline constexpr std::string_view kAcknowledgeTemplate = "acknowledge";

// Rule/form/fallback dialogue policy over an immutable configuration.
// Thread-safe for distinct sessions; callers serialize calls per session.
class DialogueEngine {
 public:
  struct Options {
    IdGenerator session_ids;
    ProfileStore* profiles = nullptr;
    LogSink* log = nullptr;
  };

  // Validates every cross reference and throws Error(invalid_reference)
  // naming the offending id. Claimed intents without an explicit rule get a
  // default rule "route:<intent>" (priority 0, any form state) invoking the
  // owning skill. Such a rule interrupts an active form; the form resumes
  // on the next turn.
  DialogueEngine(std::shared_ptr<const NluModel> model, DialogueConfig config,
                 SkillRegistry registry, Options options);

  Session new_session(ChannelDescriptor channel) const;

  std::vector<Response> handle_message(Session& session, std::string_view text,
                                       Instant now) const;

  // Runs a skill operation outside of a user turn (badge scans, consent
  // answers). Responses belong to the current turn.
  std::vector<Response> run_operation(Session& session, const std::string& skill,
                                      const std::string& operation,
                                      nlohmann::json params, Instant now) const;

  std::vector<SlotSet> fill_slots(const Session& session, const NluResult& nlu) const;
  PolicyDecision apply_policy(const Session& session, const NluResult& nlu) const;
  void reset_session(Session& session) const;

  const NluModel& nlu() const { return *model_; }
  const DialogueConfig& config() const { return config_; }
  const SkillRegistry& registry() const { return registry_; }
  const std::vector<Rule>& rules() const { return rules_; }
  ProfileStore* profiles() const { return options_.profiles; }

 private:
  friend class Turn;

  std::vector<SlotSet> mappings_for(const Session& session, const NluResult& nlu,
                                    const std::vector<const RequiredSlot*>& slots) const;
  void validate() const;

  std::shared_ptr<const NluModel> model_;
  DialogueConfig config_;
  SkillRegistry registry_;
  Options options_;
  std::vector<Rule> rules_;
};

}  // namespace confassist
