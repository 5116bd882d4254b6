#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "confassist/conference.hpp"
#include "confassist/poi.hpp"
#include "confassist/skills.hpp"

namespace confassist {

// Slots shared between skills and the dialogue configuration.
namespace slots {
inline const std::string kFocus = "focus";
inline const std::string kConsentPending = "consent_pending";
inline const std::string kConsentDecision = "consent_decision";
inline const std::string kPendingFaceToken = "pending_face_token";

inline const std::string kPoiCategory = "poi_category";
inline const std::string kLiked = "liked_keywords";
inline const std::string kDisliked = "disliked_keywords";
inline const std::string kPoiRejected = "poi_rejected";
inline const std::string kPoiCurrent = "poi_current";
inline const std::string kPoiAccepted = "poi_accepted";
inline const std::string kPoiStage = "poi_stage";

inline const std::string kInterests = "interests";
inline const std::string kInterestsSuggested = "interests_suggested";
inline const std::string kConfRecommended = "conf_recommended";
inline const std::string kConfCurrent = "conf_current";
inline const std::string kConfStage = "conf_stage";
}  // namespace slots

// Chit-chat, FAQ templates, out-of-scope handling, identification and
// consent. Operations: "" (by intent), "out_of_scope", "identify" (params
// {token, name?}), "consent" (params {decision}), "consent_granted",
// "consent_denied".
class CoreSkill final : public Skill {
 public:
  std::string name() const override { return std::string(kCoreSkill); }
  std::set<std::string> claimed_intents() const override;
  std::vector<std::string> required_templates() const override;
  void handle(TurnContext& ctx, std::string_view operation) override;

 private:
  void greet(TurnContext& ctx);
  void identify(TurnContext& ctx);
  void answer_consent(TurnContext& ctx, bool granted);
  void ask_consent(TurnContext& ctx);
};

// Operations: "start", "recommend", "next", "accept", "preference",
// "details", "transport", "relax"; "" dispatches on the routed intent.
class PoiSkill final : public Skill {
 public:
  PoiSkill(std::shared_ptr<const PoiCatalog> catalog, std::string map_url_template);

  std::string name() const override { return "poi"; }
  std::set<std::string> claimed_intents() const override;
  std::vector<std::string> required_templates() const override;
  void handle(TurnContext& ctx, std::string_view operation) override;

  // Preference state as stored in the session slots.
  static PoiPreferences preferences(const Session& session);

 private:
  void start(TurnContext& ctx);
  void recommend(TurnContext& ctx);
  void next(TurnContext& ctx);
  void accept(TurnContext& ctx);
  void preference(TurnContext& ctx);
  void details(TurnContext& ctx);
  void transport(TurnContext& ctx);
  void relax(TurnContext& ctx);
  const PoiItem* focused_item(const Session& session) const;

  std::shared_ptr<const PoiCatalog> catalog_;
  std::string map_url_template_;
};

// Operations: "keynotes", "next", "start", "use_suggested",
// "decline_suggested", "recommend", "another", "accept", "interest",
// "schedule"; "" dispatches on the routed intent.
class ConferenceSkill final : public Skill {
 public:
  explicit ConferenceSkill(std::shared_ptr<const Programme> programme);

  std::string name() const override { return "conference"; }
  std::set<std::string> claimed_intents() const override;
  std::vector<std::string> required_templates() const override;
  void handle(TurnContext& ctx, std::string_view operation) override;

  static InterestProfile interest_profile(const Session& session);

 private:
  void keynotes(TurnContext& ctx);
  void next(TurnContext& ctx);
  void start(TurnContext& ctx);
  void recommend(TurnContext& ctx);
  void accept(TurnContext& ctx);
  void interest(TurnContext& ctx);
  void schedule(TurnContext& ctx);
  std::string when(const ConferenceEvent& event) const;

  std::shared_ptr<const Programme> programme_;
};

}  // namespace confassist
