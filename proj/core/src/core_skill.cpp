#include <spdlog/spdlog.h>

#include "confassist/builtin_skills.hpp"
#include "confassist/error.hpp"
#include "confassist/profile.hpp"

namespace confassist {

namespace {

const std::map<std::string, std::string, std::less<>> kIntentTemplates = {
    {"goodbye", "goodbye"},     {"who_are_you", "who_are_you"}, {"ask_weather", "weather"},
    {"thanks", "thanks"},       {"help", "help"},               {"affirm", "affirm_ack"},
    {"deny", "deny_ack"},
};

std::string param_string(const TurnContext& ctx, const char* key) {
  const auto& params = ctx.params();
  if (!params.is_object() || !params.contains(key) || !params.at(key).is_string()) {
    return {};
  }
  return params.at(key).get<std::string>();
}

}  // namespace

std::set<std::string> CoreSkill::claimed_intents() const {
  return {"greet", "goodbye", "who_are_you", "ask_weather", "thanks", "help", "affirm", "deny"};
}

std::vector<std::string> CoreSkill::required_templates() const {
  std::vector<std::string> out{"greet",           "greet_returning", "out_of_scope",
                               "consent_request", "consent_thanks",  "consent_denied",
                               "identified",      "welcome_back",    "identify_unavailable"};
  for (const auto& [intent, id] : kIntentTemplates) out.push_back(id);
  return out;
}

void CoreSkill::handle(TurnContext& ctx, std::string_view operation) {
  if (operation == "identify") return identify(ctx);
  if (operation == "consent") {
    const auto decision = param_string(ctx, "decision");
    if (decision != "granted" && decision != "denied") {
      throw Error(ErrorCode::protocol, "consent decision must be 'granted' or 'denied'");
    }
    return answer_consent(ctx, decision == "granted");
  }
  if (operation == "consent_granted") return answer_consent(ctx, true);
  if (operation == "consent_denied") return answer_consent(ctx, false);
  if (operation == kOutOfScope) return ctx.say("out_of_scope");
  if (!operation.empty()) {
    throw Error(ErrorCode::invalid_reference,
                "core has no operation '" + std::string(operation) + "'");
  }

  const auto& intent = ctx.nlu().intent;
  if (intent == "greet") return greet(ctx);
  if (intent == "goodbye") {
    if (auto user = ctx.consented_user()) ctx.profiles()->touch(user->user_id, ctx.now());
  }
  if (const auto it = kIntentTemplates.find(intent); it != kIntentTemplates.end()) {
    return ctx.say(it->second);
  }
  ctx.say("out_of_scope");
}

void CoreSkill::greet(TurnContext& ctx) {
  if (auto user = ctx.consented_user(); user && user->display_name) {
    return ctx.say("greet_returning", personalize(*user).bindings);
  }
  ctx.say("greet");
}

void CoreSkill::identify(TurnContext& ctx) {
  const auto token = param_string(ctx, "token");
  if (token.empty()) throw Error(ErrorCode::protocol, "identify needs a non-empty token");
  ProfileStore* store = ctx.profiles();
  if (store == nullptr) return ctx.say("identify_unavailable");
  const Session& session = ctx.session();

  if (const auto uid = parse_badge(token)) {
    auto profile = store->find(*uid);
    if (!profile) {
      const auto name = param_string(ctx, "name");
      profile = store->create(*uid, name.empty() ? std::nullopt : std::optional(name), {token},
                              ctx.now());
    } else if (!profile->identifiers.count(token)) {
      profile = store->link(*uid, token, ctx.now());
    }
    ctx.set_slot(std::string(kUserIdSlot), *uid);
    if (profile->consent == Consent::granted) {
      if (const auto face = session.slot_string(slots::kPendingFaceToken)) {
        ctx.clear_slot(slots::kPendingFaceToken);
        if (!store->identify(*face)) store->link(*uid, *face, ctx.now());
      }
      store->touch(*uid, ctx.now());
      return ctx.say(profile->display_name ? "welcome_back" : "identified",
                     personalize(*profile).bindings);
    }
    if (profile->consent == Consent::unknown && session.template_uses("consent_request") == 0) {
      return ask_consent(ctx);
    }
    return ctx.say("identified");
  }

  // Opaque recognition token supplied by the client.
  if (auto profile = store->identify(token)) {
    ctx.set_slot(std::string(kUserIdSlot), profile->user_id);
    store->touch(profile->user_id, ctx.now());
    return ctx.say(profile->display_name ? "welcome_back" : "identified",
                   personalize(*profile).bindings);
  }
  const auto uid = session.user_id();
  if (!uid) {
    ctx.set_slot(slots::kPendingFaceToken, token);
    return ctx.reply(
        IdentifyRequest{"Please scan the QR code on your badge so I can recognize you."});
  }
  const auto bound = store->find(*uid);
  if (bound && bound->consent == Consent::granted) {
    store->link(*uid, token, ctx.now());
    return ctx.say("identified");
  }
  if (bound && bound->consent == Consent::unknown &&
      session.template_uses("consent_request") == 0) {
    ctx.set_slot(slots::kPendingFaceToken, token);
    return ask_consent(ctx);
  }
  // Denied, or already asked in this session: the token is not kept.
  ctx.say("identified");
}

void CoreSkill::ask_consent(TurnContext& ctx) {
  ctx.set_slot(slots::kConsentPending, std::string("yes"));
  ctx.say("consent_request");
}

void CoreSkill::answer_consent(TurnContext& ctx, bool granted) {
  const Session& session = ctx.session();
  if (session.slot(slots::kConsentPending) == nullptr) {
    throw Error(ErrorCode::protocol, "no consent request is pending in this session");
  }
  const auto uid = session.user_id();
  ProfileStore* store = ctx.profiles();
  if (!uid || store == nullptr) {
    throw Error(ErrorCode::protocol, "consent answered without an identified user");
  }
  const auto profile =
      store->record_consent(*uid, granted ? Consent::granted : Consent::denied, ctx.now());
  ctx.clear_slot(slots::kConsentPending);
  ctx.set_slot(slots::kConsentDecision, std::string(to_string(profile.consent)));
  const auto face = session.slot_string(slots::kPendingFaceToken);
  if (face) ctx.clear_slot(slots::kPendingFaceToken);
  if (!granted) return ctx.say("consent_denied");
  if (face) {
    try {
      store->link(*uid, *face, ctx.now());
    } catch (const Error& e) {
      spdlog::warn("recognition token not linked to '{}': {}", *uid, e.what());
    }
  }
  store->touch(*uid, ctx.now());
  ctx.say("consent_thanks", personalize(profile).bindings);
}

}  // namespace confassist
