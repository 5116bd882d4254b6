#include <algorithm>

#include "confassist/builtin_skills.hpp"
#include "confassist/error.hpp"
#include "confassist/profile.hpp"
#include "confassist/text.hpp"

namespace confassist {

namespace {

constexpr std::string_view kStageConfirm = "confirm_interests";
constexpr std::string_view kStageEliciting = "eliciting";
constexpr std::string_view kStageRecommended = "recommended";
constexpr std::string_view kStageNoMatch = "no_match";
constexpr std::string_view kStageAccepted = "accepted";

std::string first_sentence(const std::string& text) {
  const auto end = text.find(". ");
  return end == std::string::npos ? text : text.substr(0, end + 1);
}

}  // namespace

ConferenceSkill::ConferenceSkill(std::shared_ptr<const Programme> programme)
    : programme_(std::move(programme)) {
  if (!programme_) throw Error(ErrorCode::invalid_reference, "conference skill needs a programme");
}

std::set<std::string> ConferenceSkill::claimed_intents() const {
  return {"ask_keynotes", "ask_next_session", "ask_session_recommendation", "ask_schedule",
          "state_interest"};
}

std::vector<std::string> ConferenceSkill::required_templates() const {
  return {"conf_keynotes",       "conf_no_keynotes",   "conf_next",
          "conf_ended",          "conf_confirm_interests", "conf_recommendation",
          "conf_no_match",       "conf_accepted",      "conf_schedule",
          "conf_nothing_found"};
}

InterestProfile ConferenceSkill::interest_profile(const Session& session) {
  InterestProfile profile;
  for (const auto& i : session.slot_list(slots::kInterests)) {
    const auto lower = to_lower(i);
    if (std::find(profile.interests.begin(), profile.interests.end(), lower) ==
        profile.interests.end()) {
      profile.interests.push_back(lower);
    }
  }
  for (const auto& id : session.slot_list(slots::kConfRecommended)) {
    profile.recommended_ids.insert(id);
  }
  return profile;
}

void ConferenceSkill::handle(TurnContext& ctx, std::string_view operation) {
  std::string op(operation);
  if (op.empty()) {
    const auto& intent = ctx.nlu().intent;
    if (intent == "ask_keynotes") op = "keynotes";
    else if (intent == "ask_next_session") op = "next";
    else if (intent == "ask_session_recommendation") op = "start";
    else if (intent == "state_interest") op = "interest";
    else op = "schedule";
  }
  ctx.set_slot(slots::kFocus, std::string("conference"));
  if (op == "keynotes") return keynotes(ctx);
  if (op == "next") return next(ctx);
  if (op == "start") return start(ctx);
  if (op == "recommend") return recommend(ctx);
  if (op == "accept") return accept(ctx);
  if (op == "interest") return interest(ctx);
  if (op == "schedule") return schedule(ctx);
  if (op == "another") {
    if (ctx.session().slot(slots::kConfCurrent) == nullptr) return start(ctx);
    return recommend(ctx);
  }
  if (op == "use_suggested") {
    ctx.set_slot(slots::kInterests, ctx.session().slot_list(slots::kInterestsSuggested), true);
    ctx.clear_slot(slots::kInterestsSuggested);
    return recommend(ctx);
  }
  if (op == "decline_suggested") {
    ctx.clear_slot(slots::kInterestsSuggested);
    ctx.set_slot(slots::kConfStage, std::string(kStageEliciting));
    return ctx.activate_form("session_form");
  }
  throw Error(ErrorCode::invalid_reference, "conference has no operation '" + op + "'");
}

std::string ConferenceSkill::when(const ConferenceEvent& event) const {
  return "day " + std::to_string(programme_->day_number(event.start)) + ", " +
         format_clock(event.start) + "-" + format_clock(event.end);
}

void ConferenceSkill::keynotes(TurnContext& ctx) {
  const auto list = confassist::keynotes(*programme_);
  if (list.empty()) return ctx.say("conf_no_keynotes");
  ListCard card{"Keynotes", {}};
  std::vector<std::string> speakers;
  for (const auto& e : list) {
    card.entries.push_back(join(e.speakers, " & ") + ": " + e.title + " (" + when(e) + ", " +
                           e.room + ")");
    speakers.insert(speakers.end(), e.speakers.begin(), e.speakers.end());
  }
  ctx.say("conf_keynotes",
          {{"count", std::to_string(list.size())}, {"speakers", join(speakers, ", ")}});
  ctx.reply(std::move(card));
}

void ConferenceSkill::next(TurnContext& ctx) {
  const ConferenceEvent* e = next_session(*programme_, ctx.now());
  if (e == nullptr) return ctx.say("conf_ended");
  ctx.say("conf_next", {{"title", e->title},
                        {"when", when(*e)},
                        {"room", e->room},
                        {"speakers", join(e->speakers, ", ")},
                        {"summary", first_sentence(e->abstract)}});
}

void ConferenceSkill::start(TurnContext& ctx) {
  const Session& session = ctx.session();
  const auto topics = ctx.nlu().values("topic");
  if (!topics.empty()) {
    ctx.set_slot(slots::kInterests, topics, true);
    return recommend(ctx);
  }
  if (!session.slot_list(slots::kInterests).empty()) return recommend(ctx);
  if (auto user = ctx.consented_user()) {
    const auto prior = personalize(*user).prior_interests;
    if (!prior.empty()) {
      ctx.set_slot(slots::kInterestsSuggested, prior);
      ctx.set_slot(slots::kConfStage, std::string(kStageConfirm));
      return ctx.say("conf_confirm_interests", {{"suggested", join(prior, ", ")}});
    }
  }
  ctx.set_slot(slots::kConfStage, std::string(kStageEliciting));
  ctx.activate_form("session_form");
}

void ConferenceSkill::recommend(TurnContext& ctx) {
  const auto profile = interest_profile(ctx.session());
  const ConferenceEvent* e = recommend_session(*programme_, profile, ctx.now());
  if (auto user = ctx.consented_user(); user && !profile.interests.empty()) {
    ctx.profiles()->remember_interests(user->user_id, profile.interests, ctx.now());
  }
  if (e == nullptr) {
    ctx.clear_slot(slots::kConfCurrent);
    ctx.set_slot(slots::kConfStage, std::string(kStageNoMatch));
    return ctx.say("conf_no_match");
  }
  ctx.set_slot(slots::kConfRecommended, std::vector<std::string>{e->id}, true);
  ctx.set_slot(slots::kConfCurrent, e->id);
  ctx.set_slot(slots::kConfStage, std::string(kStageRecommended));
  ctx.say("conf_recommendation", {{"title", e->title},
                                  {"when", when(*e)},
                                  {"room", e->room},
                                  {"speakers", join(e->speakers, ", ")},
                                  {"summary", first_sentence(e->abstract)}});
}

void ConferenceSkill::accept(TurnContext& ctx) {
  const auto id = ctx.session().slot_string(slots::kConfCurrent);
  const ConferenceEvent* e = id ? programme_->find(*id) : nullptr;
  if (e == nullptr) return start(ctx);
  ctx.set_slot(slots::kConfStage, std::string(kStageAccepted));
  ctx.say("conf_accepted", {{"title", e->title}, {"when", when(*e)}, {"room", e->room}});
}

void ConferenceSkill::interest(TurnContext& ctx) {
  const auto topics = ctx.nlu().values("topic");
  if (topics.empty()) return start(ctx);
  ctx.set_slot(slots::kInterests, topics, true);
  recommend(ctx);
}

void ConferenceSkill::schedule(TurnContext& ctx) {
  const auto& nlu = ctx.nlu();
  ScheduleFilter filter;
  std::string label;
  if (const auto v = nlu.values("speaker"); !v.empty()) {
    filter = ScheduleFilter::by_speaker(v.front());
    label = "Sessions with " + v.front();
  } else if (const auto r = nlu.values("room"); !r.empty()) {
    filter = ScheduleFilter::in_room(r.front());
    label = "Sessions in " + r.front();
  } else {
    const auto first = programme_->first_day();
    auto day = std::max(first, day_of(ctx.now()));
    if (const auto d = nlu.values("day"); !d.empty()) {
      if (d.front() == "tomorrow") {
        day = day_of(ctx.now()) + std::chrono::days{1};
      } else if (d.front() == "today") {
        day = day_of(ctx.now());
      } else if (d.front().rfind("day", 0) == 0) {
        day = first + std::chrono::days{std::stoi(d.front().substr(3)) - 1};
      }
    }
    filter = ScheduleFilter::on_day(day);
    label = "Programme for day " + std::to_string((day - first).count() + 1);
  }
  const auto events = schedule_query(*programme_, filter);
  if (events.empty()) return ctx.say("conf_nothing_found");
  ListCard card{label, {}};
  for (const auto& e : events) {
    const auto time = filter.kind == ScheduleFilter::Kind::day
                          ? format_clock(e.start) + "-" + format_clock(e.end)
                          : when(e);
    card.entries.push_back(time + " " + e.title + " (" + e.room + ")");
  }
  ctx.say("conf_schedule", {{"label", label},
                           {"count", std::to_string(events.size()) + (events.size() == 1 ? " event" : " events")}});
  ctx.reply(std::move(card));
}

}  // namespace confassist
