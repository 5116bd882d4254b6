#include "confassist/dialogue.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "confassist/builtin_skills.hpp"
#include "confassist/error.hpp"
#include "confassist/logstore.hpp"
#include "confassist/profile.hpp"

namespace confassist {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kMaxActionDepth = 16;

bool contains(const std::vector<std::string>& list, const std::string& value) {
  return std::find(list.begin(), list.end(), value) != list.end();
}

SlotValue slot_value_from_json(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<std::string>>();
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

Action action_from_json(const nlohmann::json& j) {
  if (j.contains("say")) {
    SayTemplate a;
    a.template_id = j.at("say").get<std::string>();
    if (j.contains("bindings")) {
      for (const auto& [k, v] : j.at("bindings").items()) {
        a.bindings[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    return a;
  }
  if (j.contains("invoke")) {
    return InvokeSkill{j.at("invoke").get<std::string>(),
                       j.value("operation", std::string{})};
  }
  if (j.contains("set_slot")) {
    return SetSlot{j.at("set_slot").get<std::string>(),
                   slot_value_from_json(j.at("value"))};
  }
  if (j.contains("activate_form")) {
    return ActivateForm{j.at("activate_form").get<std::string>()};
  }
  if (j.contains("deactivate_form")) return DeactivateForm{};
  throw Error(ErrorCode::invalid_document, "unknown action " + j.dump());
}

SlotMapping mapping_from_json(const nlohmann::json& j) {
  SlotMapping m;
  if (j.contains("entity")) {
    m.kind = SlotMapping::Kind::entity;
    m.entity_type = j.at("entity").get<std::string>();
    m.intents = j.value("intents", std::vector<std::string>{});
  } else if (j.contains("intent")) {
    m.kind = SlotMapping::Kind::intent;
    const auto& intent = j.at("intent");
    m.intents = intent.is_array() ? intent.get<std::vector<std::string>>()
                                  : std::vector<std::string>{intent.get<std::string>()};
    m.value = slot_value_from_json(j.at("value"));
  } else {
    throw Error(ErrorCode::invalid_document, "slot mapping needs 'entity' or 'intent'");
  }
  m.not_intents = j.value("not_intents", std::vector<std::string>{});
  m.target = j.value("target", std::string{});
  return m;
}

std::optional<UserProfile> consented_profile(const Session& session,
                                            const ProfileStore* profiles) {
  const auto uid = session.user_id();
  if (!uid || profiles == nullptr) return std::nullopt;
  auto profile = profiles->find(*uid);
  if (!profile || profile->consent != Consent::granted) return std::nullopt;
  return profile;
}

}  // namespace

std::string describe(const Action& action) {
  return std::visit(
      overloaded{
          [](const SayTemplate& a) { return "say(" + a.template_id + ")"; },
          [](const InvokeSkill& a) {
            return "invoke(" + a.skill + (a.operation.empty() ? "" : ":" + a.operation) + ")";
          },
          [](const SetSlot& a) { return "set_slot(" + a.name + "=" + slot_text(a.value) + ")"; },
          [](const ActivateForm& a) { return "activate_form(" + a.name + ")"; },
          [](const DeactivateForm&) { return std::string("deactivate_form"); },
      },
      action);
}

bool SlotPredicate::matches(const Session& session) const {
  const SlotValue* value = session.slot(slot);
  if (present && (*present != (value != nullptr))) return false;
  if (equals) {
    if (value == nullptr || slot_text(*value) != *equals) return false;
  }
  return true;
}

bool Rule::matches(const Session& session, const NluResult& nlu) const {
  if (nlu.intent != when_intent) return false;
  if (when_form == kNoForm) {
    if (session.active_form()) return false;
  } else if (when_form != kAnyForm) {
    if (session.active_form() != when_form) return false;
  }
  return std::all_of(when_slots.begin(), when_slots.end(),
                     [&](const SlotPredicate& p) { return p.matches(session); });
}

bool SlotMapping::applies_to(const NluResult& nlu) const {
  if (contains(not_intents, nlu.intent)) return false;
  if (kind == Kind::intent) return contains(intents, nlu.intent);
  return intents.empty() || contains(intents, nlu.intent);
}

std::vector<std::string> RequiredSlot::targets() const {
  std::vector<std::string> out{name};
  for (const auto& m : mappings) {
    if (!m.target.empty() && !contains(out, m.target)) out.push_back(m.target);
  }
  return out;
}

bool RequiredSlot::filled(const Session& session) const {
  const auto all = targets();
  return std::any_of(all.begin(), all.end(),
                     [&](const std::string& t) { return session.slot(t) != nullptr; });
}

const RequiredSlot* Form::next_unfilled(const Session& session) const {
  for (const auto& slot : required_slots) {
    if (!slot.filled(session)) return &slot;
  }
  return nullptr;
}

const Form* DialogueConfig::find_form(std::string_view name) const {
  for (const auto& f : forms) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const SlotSpec* DialogueConfig::find_slot(std::string_view name) const {
  for (const auto& s : slots) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

DialogueConfig DialogueConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("schema_version", 0) != 1) {
    throw Error(ErrorCode::invalid_document,
                "dialogue config must be an object with schema_version 1");
  }
  DialogueConfig config;
  try {
    config.templates = TemplateCatalog::from_json(doc.at("templates"));
    const auto slots = doc.value("slots", nlohmann::json::object());
    for (const auto& [name, spec] : slots.items()) {
      SlotSpec s;
      s.name = name;
      s.is_list = spec.value("type", std::string("text")) == "list";
      s.exclusive_with = spec.value("exclusive_with", std::string{});
      config.slots.push_back(std::move(s));
    }
    for (const auto& j : doc.value("forms", nlohmann::json::array())) {
      Form form;
      form.name = j.at("name").get<std::string>();
      form.skill = j.value("skill", std::string(kCoreSkill));
      for (const auto& rs : j.at("required_slots")) {
        RequiredSlot slot;
        slot.name = rs.at("name").get<std::string>();
        slot.prompt = rs.at("prompt").get<std::string>();
        for (const auto& m : rs.at("mappings")) slot.mappings.push_back(mapping_from_json(m));
        slot.completes = rs.value("completes", std::vector<std::string>{});
        form.required_slots.push_back(std::move(slot));
      }
      form.on_complete = action_from_json(j.at("on_complete"));
      config.forms.push_back(std::move(form));
    }
    for (const auto& j : doc.value("rules", nlohmann::json::array())) {
      Rule rule;
      rule.id = j.at("id").get<std::string>();
      rule.when_intent = j.at("when_intent").get<std::string>();
      rule.when_form = j.value("when_form", std::string(kAnyForm));
      rule.priority = j.value("priority", 0);
      for (const auto& p : j.value("when_slots", nlohmann::json::array())) {
        SlotPredicate pred;
        pred.slot = p.at("slot").get<std::string>();
        if (p.contains("equals")) pred.equals = p.at("equals").get<std::string>();
        if (p.contains("present")) pred.present = p.at("present").get<bool>();
        rule.when_slots.push_back(std::move(pred));
      }
      for (const auto& a : j.at("actions")) rule.actions.push_back(action_from_json(a));
      config.rules.push_back(std::move(rule));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_document, std::string("dialogue config: ") + e.what());
  }
  return config;
}

DialogueConfig DialogueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::not_found, "cannot open dialogue config '" + path + "'");
  }
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::invalid_document, "dialogue config '" + path + "': " + e.what());
  }
}

// One execution scope: a user turn or an out-of-turn operation.
class Turn final : public TurnContext {
 public:
  Turn(const DialogueEngine& engine, Session& session, NluResult nlu, Instant now,
       nlohmann::json params)
      : engine_(engine),
        session_(session),
        nlu_(std::move(nlu)),
        now_(now),
        params_(std::move(params)) {}

  const Session& session() const override { return session_; }
  const NluResult& nlu() const override { return nlu_; }
  Instant now() const override { return now_; }
  const nlohmann::json& params() const override { return params_; }

  void say(const std::string& template_id, const Bindings& bindings) override {
    Bindings all;
    for (const auto& [name, value] : session_.slots()) all[name] = slot_text(value);
    if (auto user = consented_user(); user && user->display_name) {
      all["name"] = *user->display_name;
    }
    for (const auto& [k, v] : bindings) all[k] = v;
    const auto uses = session_.template_uses(template_id);
    emit(Response{engine_.config_.templates.render(template_id, uses, all), attribution_,
                  template_id});
  }

  void reply(ResponsePayload payload) override {
    emit(Response{std::move(payload), attribution_, {}});
  }

  void set_slot(const std::string& name, SlotValue value, bool append) override {
    apply_slot(SlotSet{name, std::move(value), append, false});
  }

  void clear_slot(const std::string& name) override {
    if (session_.slot(name) != nullptr) {
      session_.record(SlotSet{name, std::string{}, false, true}, now_);
    }
  }

  void activate_form(const std::string& name) override {
    const Form* form = engine_.config_.find_form(name);
    if (form == nullptr) {
      throw Error(ErrorCode::invalid_reference, "unknown form '" + name + "'");
    }
    if (session_.active_form() != name) {
      if (const auto& current = session_.active_form()) {
        session_.record(FormDeactivated{*current}, now_);
      }
      session_.record(FormActivated{name}, now_);
    }
    std::vector<const RequiredSlot*> all;
    for (const auto& slot : form->required_slots) all.push_back(&slot);
    for (auto& set : engine_.mappings_for(session_, nlu_, all)) apply_slot(std::move(set));
    execute(form_step(*form), form->skill);
  }

  void deactivate_form() override {
    if (const auto& current = session_.active_form()) {
      session_.record(FormDeactivated{*current}, now_);
    }
  }

  ProfileStore* profiles() override { return engine_.options_.profiles; }

  std::optional<UserProfile> consented_user() const override {
    return consented_profile(session_, engine_.options_.profiles);
  }

  void apply_slot(SlotSet set) {
    if (set.append && !set.unset) {
      if (const SlotSpec* spec = engine_.config_.find_slot(set.name);
          spec != nullptr && !spec->exclusive_with.empty()) {
        std::vector<std::string> added;
        if (const auto* s = std::get_if<std::string>(&set.value)) {
          added.push_back(*s);
        } else {
          added = std::get<std::vector<std::string>>(set.value);
        }
        auto other = session_.slot_list(spec->exclusive_with);
        const auto before = other.size();
        other.erase(std::remove_if(other.begin(), other.end(),
                                   [&](const std::string& v) { return contains(added, v); }),
                    other.end());
        if (other.size() != before) {
          session_.record(SlotSet{spec->exclusive_with, std::move(other), false, false}, now_);
        }
      }
    }
    session_.record(std::move(set), now_);
  }

  static std::vector<Action> form_step(const Form& form, const Session& session) {
    if (const RequiredSlot* next = form.next_unfilled(session)) {
      return {SayTemplate{next->prompt, {}}};
    }
    return {DeactivateForm{}, form.on_complete};
  }

  std::vector<Action> form_step(const Form& form) const { return form_step(form, session_); }

  void execute(const std::vector<Action>& actions, const std::string& attribution) {
    for (const auto& action : actions) execute(action, attribution);
  }

  void execute(const Action& action, const std::string& attribution) {
    if (++depth_ > kMaxActionDepth) {
      throw Error(ErrorCode::protocol, "action recursion limit reached");
    }
    const std::string saved = attribution_;
    attribution_ = attribution;
    std::visit(
        overloaded{
            [&](const SayTemplate& a) { say(a.template_id, a.bindings); },
            [&](const InvokeSkill& a) { invoke(a); },
            [&](const SetSlot& a) {
              const SlotSpec* spec = engine_.config_.find_slot(a.name);
              apply_slot(SlotSet{a.name, a.value, spec != nullptr && spec->is_list, false});
            },
            [&](const ActivateForm& a) { activate_form(a.name); },
            [&](const DeactivateForm&) { deactivate_form(); },
        },
        action);
    attribution_ = saved;
    --depth_;
  }

  void invoke(const InvokeSkill& a) {
    const SkillDescriptor* skill = engine_.registry_.find(a.skill);
    if (skill == nullptr) {
      throw Error(ErrorCode::invalid_reference, "unknown skill '" + a.skill + "'");
    }
    session_.record(SkillInvoked{a.skill, a.operation}, now_);
    attribution_ = a.skill;
    const int saved_depth = depth_;
    try {
      skill->handler->handle(*this, a.operation);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::protocol) throw;
      fail(e.what(), saved_depth);
    } catch (const std::exception& e) {
      fail(e.what(), saved_depth);
    }
  }

  std::vector<Response>& responses() { return responses_; }
  void set_attribution(std::string a) { attribution_ = std::move(a); }

 private:
  void fail(const std::string& message, int depth) {
    spdlog::error("skill '{}' failed in session {}: {}", attribution_, session_.id(), message);
    depth_ = depth;
    session_.record(ActionFailed{message}, now_);
    say(std::string(kApologyTemplate), {});
  }

  void emit(Response response) {
    validate(response.payload);
    const Event& event = session_.record(BotUttered{response}, now_);
    if (engine_.options_.log != nullptr) {
      LogRecord record;
      record.session_id = session_.id();
      record.turn = event.turn;
      record.seq = event.seq;
      record.timestamp = event.timestamp;
      record.direction = Direction::bot;
      record.text = flatten_to_text(response.payload);
      if (!nlu_.intent.empty()) record.intent = nlu_.intent;
      record.skill = response.skill;
      record.channel_kind = std::string(to_string(session_.channel().kind));
      if (auto user = consented_user()) record.user_id = user->user_id;
      engine_.options_.log->append(record);
    }
    responses_.push_back(std::move(response));
  }

  const DialogueEngine& engine_;
  Session& session_;
  NluResult nlu_;
  Instant now_;
  nlohmann::json params_;
  std::string attribution_{kCoreSkill};
  std::vector<Response> responses_;
  int depth_ = 0;
};

DialogueEngine::DialogueEngine(std::shared_ptr<const NluModel> model,
                               DialogueConfig config, SkillRegistry registry,
                               Options options)
    : model_(std::move(model)),
      config_(std::move(config)),
      registry_(std::move(registry)),
      options_(std::move(options)) {
  if (!model_) throw Error(ErrorCode::invalid_reference, "dialogue engine needs an NLU model");
  if (!options_.session_ids) options_.session_ids = random_ids("s-");
  rules_ = config_.rules;
  std::set<std::string> explicit_intents;
  for (const auto& r : rules_) explicit_intents.insert(r.when_intent);
  for (const auto& [intent, owner] : registry_.routing_table()) {
    if (explicit_intents.count(intent)) continue;
    Rule rule;
    rule.id = "route:" + intent;
    rule.when_intent = intent;
    rule.actions = {InvokeSkill{owner, {}}};
    rules_.push_back(std::move(rule));
  }
  validate();
}

void DialogueEngine::validate() const {
  const auto require_template = [&](const std::string& id, const std::string& where) {
    if (!config_.templates.contains(id)) {
      throw Error(ErrorCode::invalid_reference,
                  where + " references unknown template '" + id + "'");
    }
  };
  const auto require_intent = [&](const std::string& intent, const std::string& where) {
    if (intent != kOutOfScope && !model_->has_intent(intent)) {
      throw Error(ErrorCode::invalid_reference,
                  where + " references unknown intent '" + intent + "'");
    }
  };
  const auto check_action = [&](const Action& action, const std::string& where) {
    std::visit(overloaded{
                   [&](const SayTemplate& a) { require_template(a.template_id, where); },
                   [&](const InvokeSkill& a) {
                     if (registry_.find(a.skill) == nullptr) {
                       throw Error(ErrorCode::invalid_reference,
                                   where + " references unknown skill '" + a.skill + "'");
                     }
                   },
                   [&](const SetSlot& a) {
                     if (a.name.empty()) {
                       throw Error(ErrorCode::invalid_reference, where + " sets an unnamed slot");
                     }
                   },
                   [&](const ActivateForm& a) {
                     if (config_.find_form(a.name) == nullptr) {
                       throw Error(ErrorCode::invalid_reference,
                                   where + " references unknown form '" + a.name + "'");
                     }
                   },
                   [](const DeactivateForm&) {},
               },
               action);
  };

  if (registry_.find(kCoreSkill) == nullptr) {
    throw Error(ErrorCode::invalid_reference, "no 'core' skill registered");
  }
  require_template(std::string(kApologyTemplate), "engine");
  require_template(std::string(kAcknowledgeTemplate), "engine");
  for (const auto& skill : registry_.skills()) {
    for (const auto& t : skill.handler->required_templates()) {
      require_template(t, "skill '" + skill.name + "'");
    }
    for (const auto& intent : skill.claimed_intents) {
      require_intent(intent, "skill '" + skill.name + "'");
    }
  }

  std::set<std::string> slot_names;
  for (const auto& s : config_.slots) {
    if (!slot_names.insert(s.name).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate slot '" + s.name + "'");
    }
  }
  for (const auto& s : config_.slots) {
    if (!s.exclusive_with.empty() && config_.find_slot(s.exclusive_with) == nullptr) {
      throw Error(ErrorCode::invalid_reference, "slot '" + s.name +
                                                    "' is exclusive with unknown slot '" +
                                                    s.exclusive_with + "'");
    }
  }

  std::set<std::string> form_names;
  for (const auto& form : config_.forms) {
    const std::string where = "form '" + form.name + "'";
    if (!form_names.insert(form.name).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate " + where);
    }
    if (registry_.find(form.skill) == nullptr) {
      throw Error(ErrorCode::invalid_reference,
                  where + " references unknown skill '" + form.skill + "'");
    }
    if (form.required_slots.empty()) {
      throw Error(ErrorCode::schema_violation, where + " has no required slots");
    }
    std::set<std::string> names;
    for (const auto& slot : form.required_slots) {
      if (slot.name.empty() || !names.insert(slot.name).second) {
        throw Error(ErrorCode::duplicate_id,
                    where + " repeats or omits slot name '" + slot.name + "'");
      }
      require_template(slot.prompt, where);
      for (const auto& m : slot.mappings) {
        for (const auto& i : m.intents) require_intent(i, where);
        for (const auto& i : m.not_intents) require_intent(i, where);
        if (!m.target.empty() && config_.find_slot(m.target) == nullptr) {
          throw Error(ErrorCode::invalid_reference,
                      where + " maps to unknown slot '" + m.target + "'");
        }
      }
      for (const auto& c : slot.completes) {
        if (config_.find_slot(c) == nullptr) {
          throw Error(ErrorCode::invalid_reference, where + " completes unknown slot '" + c + "'");
        }
      }
    }
    check_action(form.on_complete, where);
  }

  std::set<std::string> ids;
  for (const auto& rule : rules_) {
    const std::string where = "rule '" + rule.id + "'";
    if (rule.id.empty() || !ids.insert(rule.id).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate or empty " + where);
    }
    if (rule.actions.empty()) {
      throw Error(ErrorCode::schema_violation, where + " has no actions");
    }
    require_intent(rule.when_intent, where);
    if (rule.when_form != kAnyForm && rule.when_form != kNoForm &&
        config_.find_form(rule.when_form) == nullptr) {
      throw Error(ErrorCode::invalid_reference,
                  where + " references unknown form '" + rule.when_form + "'");
    }
    for (const auto& a : rule.actions) check_action(a, where);
  }
}

Session DialogueEngine::new_session(ChannelDescriptor channel) const {
  return Session(options_.session_ids(), channel);
}

std::vector<SlotSet> DialogueEngine::mappings_for(
    const Session& session, const NluResult& nlu,
    const std::vector<const RequiredSlot*>& slots) const {
  (void)session;
  std::vector<SlotSet> out;
  const auto is_list = [&](const std::string& name) {
    const SlotSpec* spec = config_.find_slot(name);
    return spec != nullptr && spec->is_list;
  };
  for (const RequiredSlot* slot : slots) {
    for (const auto& entity : nlu.entities) {
      for (const auto& m : slot->mappings) {
        if (m.kind != SlotMapping::Kind::entity || m.entity_type != entity.entity_type ||
            !m.applies_to(nlu)) {
          continue;
        }
        const std::string target = m.target.empty() ? slot->name : m.target;
        out.push_back(SlotSet{target, entity.value, is_list(target), false});
        break;
      }
    }
    for (const auto& m : slot->mappings) {
      if (m.kind != SlotMapping::Kind::intent || !m.applies_to(nlu)) continue;
      const std::string target = m.target.empty() ? slot->name : m.target;
      out.push_back(SlotSet{target, m.value, is_list(target), false});
    }
  }
  return out;
}

std::vector<SlotSet> DialogueEngine::fill_slots(const Session& session,
                                                const NluResult& nlu) const {
  if (!session.active_form()) return {};
  const Form* form = config_.find_form(*session.active_form());
  if (form == nullptr) return {};
  const RequiredSlot* requested = form->next_unfilled(session);
  if (requested == nullptr) return {};
  auto out = mappings_for(session, nlu, {requested});
  if (out.empty()) return out;
  for (const auto& c : requested->completes) {
    const bool written = std::any_of(out.begin(), out.end(),
                                     [&](const SlotSet& s) { return s.name == c; });
    if (!written && session.slot(c) == nullptr) {
      out.push_back(SlotSet{c, std::vector<std::string>{}, true, false});
    }
  }
  return out;
}

PolicyDecision DialogueEngine::apply_policy(const Session& session,
                                            const NluResult& nlu) const {
  const Rule* best = nullptr;
  for (const auto& rule : rules_) {
    if (!rule.matches(session, nlu)) continue;
    if (best == nullptr || rule.priority > best->priority ||
        (rule.priority == best->priority && rule.id < best->id)) {
      best = &rule;
    }
  }
  PolicyDecision decision;
  if (best != nullptr) {
    decision.source = PolicyDecision::Source::rule;
    decision.rule_id = best->id;
    decision.actions = best->actions;
    return decision;
  }
  if (session.active_form()) {
    if (const Form* form = config_.find_form(*session.active_form())) {
      decision.source = PolicyDecision::Source::form;
      decision.actions = Turn::form_step(*form, session);
      return decision;
    }
  }
  decision.source = PolicyDecision::Source::fallback;
  decision.actions = {InvokeSkill{std::string(kCoreSkill), std::string(kOutOfScope)}};
  return decision;
}

std::vector<Response> DialogueEngine::handle_message(Session& session, std::string_view text,
                                                     Instant now) const {
  NluResult nlu = model_->classify(text);
  const std::string owner = registry_.route(nlu.intent).name;
  const Event& uttered = session.record(UserUttered{nlu}, now);
  if (options_.log != nullptr) {
    LogRecord record;
    record.session_id = session.id();
    record.turn = uttered.turn;
    record.seq = uttered.seq;
    record.timestamp = uttered.timestamp;
    record.direction = Direction::user;
    record.text = std::string(text);
    record.intent = nlu.intent;
    record.skill = owner;
    record.channel_kind = std::string(to_string(session.channel().kind));
    if (auto user = consented_profile(session, options_.profiles)) {
      record.user_id = user->user_id;
    }
    options_.log->append(record);
  }

  Turn turn(*this, session, nlu, now, nlohmann::json::object());
  // A consent question only accepts the very next reply.
  if (session.slot(slots::kConsentPending) != nullptr && nlu.intent != "affirm" &&
      nlu.intent != "deny") {
    turn.apply_slot(SlotSet{slots::kConsentPending, std::string(), false, true});
    if (session.slot(slots::kPendingFaceToken) != nullptr) {
      turn.apply_slot(SlotSet{slots::kPendingFaceToken, std::string(), false, true});
    }
  }
  for (auto& set : fill_slots(session, nlu)) turn.apply_slot(std::move(set));

  const PolicyDecision decision = apply_policy(session, nlu);
  std::string attribution = owner;
  if (decision.source == PolicyDecision::Source::form) {
    attribution = config_.find_form(*session.active_form())->skill;
  } else if (decision.source == PolicyDecision::Source::fallback) {
    attribution = std::string(kCoreSkill);
  }
  turn.execute(decision.actions, attribution);
  if (turn.responses().empty()) {
    turn.set_attribution(attribution);
    turn.say(std::string(kAcknowledgeTemplate), {});
  }
  return std::move(turn.responses());
}

std::vector<Response> DialogueEngine::run_operation(Session& session, const std::string& skill,
                                                    const std::string& operation,
                                                    nlohmann::json params, Instant now) const {
  if (registry_.find(skill) == nullptr) {
    throw Error(ErrorCode::invalid_reference, "unknown skill '" + skill + "'");
  }
  Turn turn(*this, session, NluResult{}, now, std::move(params));
  turn.execute(InvokeSkill{skill, operation}, skill);
  return std::move(turn.responses());
}

void DialogueEngine::reset_session(Session& session) const { session.reset(); }

}  // namespace confassist
