#include <algorithm>

#include "confassist/builtin_skills.hpp"
#include "confassist/error.hpp"
#include "confassist/profile.hpp"

namespace confassist {

namespace {

constexpr std::string_view kStageEliciting = "eliciting";
constexpr std::string_view kStageRecommended = "recommended";
constexpr std::string_view kStageNoMatch = "no_match";
constexpr std::string_view kStageAccepted = "accepted";

std::vector<std::string> keyword_entities(const NluResult& nlu) {
  std::vector<std::string> out;
  for (const auto& e : nlu.entities) {
    if ((e.entity_type == "cuisine" || e.entity_type == "keyword") &&
        std::find(out.begin(), out.end(), e.value) == out.end()) {
      out.push_back(e.value);
    }
  }
  return out;
}

ItemCard item_card(const PoiItem& item) {
  return ItemCard{item.name, std::string(to_string(item.category)) + ", " + item.address,
                  item.rating, price_glyphs(item.price_level), item.description};
}

}  // namespace

PoiSkill::PoiSkill(std::shared_ptr<const PoiCatalog> catalog, std::string map_url_template)
    : catalog_(std::move(catalog)), map_url_template_(std::move(map_url_template)) {
  if (!catalog_) throw Error(ErrorCode::invalid_reference, "poi skill needs a catalog");
}

std::set<std::string> PoiSkill::claimed_intents() const {
  return {"ask_poi", "state_preference", "state_dislike",      "no_preference",
          "reject",  "ask_directions",   "ask_poi_details"};
}

std::vector<std::string> PoiSkill::required_templates() const {
  return {"poi_recommendation", "poi_no_match", "poi_need_recommendation", "poi_accepted",
          "poi_detail",         "poi_directions", "poi_no_directions"};
}

PoiPreferences PoiSkill::preferences(const Session& session) {
  PoiPreferences prefs;
  if (const auto c = session.slot_string(slots::kPoiCategory)) {
    prefs.category = poi_category_from_string(*c);
  }
  for (const auto& k : session.slot_list(slots::kLiked)) prefs.like(k);
  for (const auto& k : session.slot_list(slots::kDisliked)) prefs.dislike(k);
  for (const auto& id : session.slot_list(slots::kPoiRejected)) prefs.reject(id);
  if (const auto id = session.slot_string(slots::kPoiAccepted)) prefs.accept(*id);
  return prefs;
}

void PoiSkill::handle(TurnContext& ctx, std::string_view operation) {
  std::string op(operation);
  if (op.empty()) {
    const auto& intent = ctx.nlu().intent;
    if (intent == "ask_poi") op = "start";
    else if (intent == "reject") op = "next";
    else if (intent == "ask_directions") op = "transport";
    else if (intent == "ask_poi_details") op = "details";
    else op = "preference";
  }
  ctx.set_slot(slots::kFocus, std::string("poi"));
  if (op == "start") return start(ctx);
  if (op == "recommend") return recommend(ctx);
  if (op == "next") return next(ctx);
  if (op == "accept") return accept(ctx);
  if (op == "preference") return preference(ctx);
  if (op == "details") return details(ctx);
  if (op == "transport") return transport(ctx);
  if (op == "relax") return relax(ctx);
  throw Error(ErrorCode::invalid_reference, "poi has no operation '" + op + "'");
}

void PoiSkill::start(TurnContext& ctx) {
  for (const auto* slot : {&slots::kPoiCategory, &slots::kLiked, &slots::kDisliked,
                           &slots::kPoiRejected, &slots::kPoiCurrent, &slots::kPoiAccepted}) {
    ctx.clear_slot(*slot);
  }
  const auto& nlu = ctx.nlu();
  if (nlu.values("category").empty() && nlu.intent != "state_dislike") {
    // "Where can I go running?" names no category; take the one of the
    // best item carrying the keywords.
    PoiPreferences probe;
    for (const auto& k : keyword_entities(nlu)) probe.like(k);
    if (!probe.liked.empty()) {
      if (const PoiItem* top = confassist::recommend(*catalog_, probe)) {
        ctx.set_slot(slots::kPoiCategory, std::string(to_string(top->category)));
      }
    }
  }
  ctx.set_slot(slots::kPoiStage, std::string(kStageEliciting));
  ctx.activate_form("poi_form");
}

void PoiSkill::recommend(TurnContext& ctx) {
  const Session& session = ctx.session();
  auto prefs = preferences(session);
  if (auto user = ctx.consented_user()) {
    for (const auto& id : personalize(*user).excluded_poi_ids) {
      if (prefs.accepted_id != id) prefs.rejected_ids.insert(id);
    }
  }
  prefs.accepted_id.reset();
  const PoiItem* item = confassist::recommend(*catalog_, prefs);
  if (item == nullptr) {
    ctx.clear_slot(slots::kPoiCurrent);
    ctx.set_slot(slots::kPoiStage, std::string(kStageNoMatch));
    return ctx.say("poi_no_match");
  }
  ctx.set_slot(slots::kPoiCurrent, item->id);
  ctx.set_slot(slots::kPoiStage, std::string(kStageRecommended));
  ctx.say("poi_recommendation", {{"poi_name", item->name},
                                 {"poi_rating", format_rating(item->rating)},
                                 {"poi_price", price_glyphs(item->price_level)},
                                 {"poi_category", std::string(to_string(item->category))}});
  ctx.reply(item_card(*item));
}

void PoiSkill::next(TurnContext& ctx) {
  const auto current = ctx.session().slot_string(slots::kPoiCurrent);
  if (!current) return ctx.say("poi_need_recommendation");
  ctx.set_slot(slots::kPoiRejected, std::vector<std::string>{*current}, true);
  ctx.clear_slot(slots::kPoiAccepted);
  recommend(ctx);
}

void PoiSkill::accept(TurnContext& ctx) {
  const auto current = ctx.session().slot_string(slots::kPoiCurrent);
  const PoiItem* item = current ? catalog_->find(*current) : nullptr;
  if (item == nullptr) return ctx.say("poi_need_recommendation");
  ctx.set_slot(slots::kPoiAccepted, item->id);
  ctx.set_slot(slots::kPoiStage, std::string(kStageAccepted));
  if (auto user = ctx.consented_user()) {
    ctx.profiles()->remember_poi(user->user_id, item->id, ctx.now());
  }
  ctx.say("poi_accepted", {{"poi_name", item->name}});
}

void PoiSkill::preference(TurnContext& ctx) {
  const Session& session = ctx.session();
  if (session.slot(slots::kPoiStage) == nullptr) return start(ctx);
  const auto& nlu = ctx.nlu();
  const auto keywords = keyword_entities(nlu);
  // "I don't like that" about the item on screen.
  if (nlu.intent == "state_dislike" && keywords.empty() && nlu.values("category").empty() &&
      session.slot(slots::kPoiCurrent) != nullptr) {
    return next(ctx);
  }
  for (const auto* slot : {&slots::kPoiCurrent, &slots::kPoiAccepted}) {
    if (const auto id = session.slot_string(*slot)) {
      ctx.set_slot(slots::kPoiRejected, std::vector<std::string>{*id}, true);
      ctx.clear_slot(*slot);
    }
  }
  if (const auto categories = nlu.values("category"); !categories.empty()) {
    ctx.set_slot(slots::kPoiCategory, categories.front());
  }
  if (nlu.intent == "no_preference" || (keywords.empty() && nlu.values("category").empty())) {
    return relax(ctx);
  }
  if (!keywords.empty()) {
    ctx.set_slot(nlu.intent == "state_dislike" ? slots::kDisliked : slots::kLiked, keywords,
                 true);
  }
  recommend(ctx);
}

const PoiItem* PoiSkill::focused_item(const Session& session) const {
  for (const auto* slot : {&slots::kPoiAccepted, &slots::kPoiCurrent}) {
    if (const auto id = session.slot_string(*slot)) return catalog_->find(*id);
  }
  return nullptr;
}

void PoiSkill::details(TurnContext& ctx) {
  const PoiItem* item = focused_item(ctx.session());
  if (item == nullptr) return ctx.say("poi_need_recommendation");
  PoiAspect aspect = PoiAspect::description;
  if (const auto aspects = ctx.nlu().values("aspect"); !aspects.empty()) {
    aspect = poi_aspect_from_string(aspects.front()).value_or(PoiAspect::description);
  }
  const char* names[] = {"address", "price", "rating", "description"};
  ctx.say("poi_detail", {{"poi_name", item->name},
                         {"aspect", names[static_cast<int>(aspect)]},
                         {"answer", aspect_answer(*item, aspect)}});
  ctx.reply(item_card(*item));
}

void PoiSkill::transport(TurnContext& ctx) {
  const PoiItem* item = focused_item(ctx.session());
  if (item == nullptr) return ctx.say("poi_need_recommendation");
  std::optional<TransportMode> mode;
  if (const auto modes = ctx.nlu().values("transport_mode"); !modes.empty()) {
    mode = transport_mode_from_string(modes.front());
  }
  const TransportOption* option = choose_transport(*item, mode);
  if (option == nullptr) return ctx.say("poi_no_directions", {{"poi_name", item->name}});
  ctx.say("poi_directions", {{"poi_name", item->name},
                             {"mode", option->mode == TransportMode::walk ? std::string("on foot")
                                                                : "by " + std::string(to_string(option->mode))},
                             {"minutes", std::to_string(option->duration_minutes)},
                             {"instructions", option->instructions}});
  ctx.reply(MapCard{item->name, item->lat, item->lon,
                    static_map_ref(map_url_template_, item->lat, item->lon),
                    option->instructions});
}

void PoiSkill::relax(TurnContext& ctx) {
  ctx.clear_slot(slots::kLiked);
  ctx.clear_slot(slots::kDisliked);
  recommend(ctx);
}

}  // namespace confassist
