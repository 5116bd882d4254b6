#include <gtest/gtest.h>

#include "confassist/assistant.hpp"
#include "confassist/error.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

namespace confassist {
namespace {

using testing::fixed_now;

TEST(Badge, Format) {
  EXPECT_EQ(parse_badge("dagfinn1:ada"), std::optional<std::string>("ada"));
  EXPECT_EQ(badge_token("ada"), "dagfinn1:ada");
  EXPECT_FALSE(parse_badge("dagfinn2:ada"));
  EXPECT_FALSE(parse_badge("dagfinn1:"));
  EXPECT_FALSE(is_badge_token("face-123"));
}

TEST(ProfileStore, IdentifyAndInjectivity) {
  ProfileStore store;
  store.create("ada", "Ada", {badge_token("ada")});
  const auto first = store.identify(badge_token("ada"));
  ASSERT_TRUE(first);
  EXPECT_EQ(first->user_id, "ada");
  EXPECT_EQ(store.identify(badge_token("ada")), first);
  EXPECT_FALSE(store.identify("dagfinn1:nobody"));
  EXPECT_THROW(store.create("ada2", std::nullopt, {badge_token("ada")}), Error);
  EXPECT_THROW(store.create("ada", std::nullopt, {}), Error);
}

TEST(ProfileStore, NonBadgeLinkNeedsConsent) {
  ProfileStore store;
  store.create("ada", "Ada", {badge_token("ada")});
  EXPECT_THROW(store.link("ada", "face-1"), Error);
  store.record_consent("ada", Consent::granted);
  store.link("ada", "face-1");
  EXPECT_EQ(store.identify("face-1")->user_id, "ada");
}

TEST(ProfileStore, DenyPurgesAndBlocksMemory) {
  ProfileStore store;
  store.create("ada", "Ada", {badge_token("ada")});
  store.record_consent("ada", Consent::granted);
  store.link("ada", "face-1");
  EXPECT_TRUE(store.remember_poi("ada", "spice-route", fixed_now()));
  store.record_consent("ada", Consent::denied);
  const auto p = *store.find("ada");
  EXPECT_TRUE(p.memory.empty());
  EXPECT_EQ(p.identifiers, std::set<std::string>{badge_token("ada")});
  EXPECT_FALSE(store.identify("face-1"));
  EXPECT_FALSE(store.remember_poi("ada", "spice-route", fixed_now()));
  EXPECT_FALSE(store.remember_interests("ada", {"music"}, fixed_now()));
  EXPECT_FALSE(store.touch("ada", fixed_now()));
  EXPECT_EQ(store.memory_writes("ada"), 1u);
}

TEST(ProfileStore, UnknownConsentWritesNothing) {
  ProfileStore store;
  store.create("bob", std::nullopt, {badge_token("bob")});
  EXPECT_FALSE(store.remember_poi("bob", "x", fixed_now()));
  EXPECT_EQ(store.memory_writes("bob"), 0u);
}

TEST(ProfileStore, InjectivityUnderRandomOps) {
  testing::Rng rng(61);
  ProfileStore store;
  const std::vector<std::string> users{"u1", "u2", "u3", "u4"};
  for (const auto& u : users) store.create(u, std::nullopt, {badge_token(u)});
  for (int i = 0; i < 500; ++i) {
    const auto& u = users[rng() % users.size()];
    const std::string token = "face-" + std::to_string(rng() % 6);
    try {
      switch (rng() % 3) {
        case 0: store.link(u, token); break;
        case 1: store.record_consent(u, rng() % 2 ? Consent::granted : Consent::denied); break;
        default: store.record_consent(u, Consent::granted); break;
      }
    } catch (const Error&) {
    }
    std::map<std::string, std::string> owner;
    for (const auto& p : store.all()) {
      for (const auto& id : p.identifiers) {
        ASSERT_TRUE(owner.emplace(id, p.user_id).second) << id;
        ASSERT_EQ(store.identify(id)->user_id, p.user_id);
      }
    }
  }
}

TEST(ProfileStore, PersistenceAndAudit) {
  testing::TempDir dir;
  {
    ProfileStore store(dir.path());
    store.create("ada", "Ada", {badge_token("ada")}, fixed_now());
    store.record_consent("ada", Consent::granted, fixed_now());
    store.remember_interests("ada", {"music"}, fixed_now());
  }
  ProfileStore again(dir.path());
  const auto p = again.find("ada");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->consent, Consent::granted);
  EXPECT_EQ(p->memory.interests, std::vector<std::string>{"music"});
  const auto audit = again.audit();
  ASSERT_GE(audit.size(), 3u);
  EXPECT_EQ(audit[0].op, "create");
  EXPECT_EQ(audit.back().op, "memory_write");

  EXPECT_TRUE(again.remove("ada"));
  EXPECT_FALSE(again.find("ada"));
  EXPECT_FALSE(again.identify(badge_token("ada")));
  EXPECT_EQ(again.audit().back().op, "delete");
}

TEST(ProfileStore, ExportImportRoundTrip) {
  ProfileStore a;
  a.create("ada", "Ada", {badge_token("ada")});
  a.record_consent("ada", Consent::granted);
  a.remember_poi("ada", "spice-route", fixed_now());
  ProfileStore b;
  b.import_json(a.export_json());
  EXPECT_EQ(b.find("ada"), a.find("ada"));
  EXPECT_EQ(profile_from_json(to_json(*a.find("ada"))), *a.find("ada"));
}

TEST(Personalize, Gating) {
  UserProfile p{"ada", "Ada", Consent::granted, {}, {{"spice-route"}, {"music"}, {}}};
  const auto g = personalize(p);
  EXPECT_TRUE(g.greet_by_name());
  EXPECT_EQ(g.bindings.at("name"), "Ada");
  EXPECT_EQ(g.prior_interests, std::vector<std::string>{"music"});
  p.consent = Consent::denied;
  EXPECT_FALSE(personalize(p).greet_by_name());
  EXPECT_TRUE(personalize(p).prior_interests.empty());
}

class ConsentFlow : public ::testing::Test {
 protected:
  Assistant assistant{testing::fixture_options()};
  Session session = assistant.engine().new_session(ChannelDescriptor::make(ChannelKind::robot));

  std::vector<Response> say(const std::string& text) {
    return assistant.engine().handle_message(session, text, fixed_now());
  }
  std::vector<Response> op(const std::string& name, nlohmann::json params) {
    return assistant.engine().run_operation(session, "core", name, std::move(params), fixed_now());
  }
};

TEST_F(ConsentFlow, ConsentWithoutRequestIsProtocolError) {
  try {
    op("consent", {{"decision", "granted"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::protocol);
  }
}

TEST_F(ConsentFlow, GrantThenAcceptRemembersPoi) {
  const auto ask = op("identify", {{"token", badge_token("ada")}, {"name", "Ada"}});
  ASSERT_EQ(ask.at(0).template_id, "consent_request");
  say("yes");
  EXPECT_EQ(assistant.profiles().find("ada")->consent, Consent::granted);
  say("Do you know of any good Indian restaurants?");
  say("Not Italian, please.");
  say("Sounds great!");
  EXPECT_EQ(assistant.profiles().find("ada")->memory.accepted_poi_ids,
            std::vector<std::string>{"spice-route"});

  Session next = assistant.engine().new_session(ChannelDescriptor::make(ChannelKind::robot));
  assistant.engine().run_operation(next, "core", "identify", {{"token", badge_token("ada")}},
                                   fixed_now());
  const auto hi = assistant.engine().handle_message(next, "Hello", fixed_now());
  EXPECT_NE(flatten_to_text(hi.at(0).payload).find("Ada"), std::string::npos);
}

TEST_F(ConsentFlow, DenyLeavesNoMemory) {
  op("identify", {{"token", badge_token("bob")}, {"name", "Bob"}});
  say("no");
  EXPECT_EQ(assistant.profiles().find("bob")->consent, Consent::denied);
  say("Do you know of any good Indian restaurants?");
  say("Not Italian, please.");
  say("Sounds great!");
  say("I'm interested in music");
  say("Bye");
  EXPECT_EQ(assistant.profiles().memory_writes("bob"), 0u);
  EXPECT_TRUE(assistant.profiles().find("bob")->memory.empty());
  const auto hi = say("Hello");
  EXPECT_EQ(flatten_to_text(hi.at(0).payload).find("Bob"), std::string::npos);
  for (const auto& r : assistant.logs().records()) EXPECT_FALSE(r.user_id);
}

TEST_F(ConsentFlow, UnansweredPromptLapses) {
  op("identify", {{"token", badge_token("dee")}});
  say("Is there a park nearby?");
  say("yes");
  EXPECT_EQ(assistant.profiles().find("dee")->consent, Consent::unknown);
  EXPECT_THROW(op("consent", {{"decision", "granted"}}), Error);
  for (const auto& r : assistant.logs().records()) EXPECT_FALSE(r.user_id);
}

TEST_F(ConsentFlow, PromptAtMostOncePerSession) {
  op("identify", {{"token", badge_token("cy")}});
  say("what is the weather like");
  op("identify", {{"token", badge_token("cy")}});
  op("identify", {{"token", "face-9"}});
  EXPECT_EQ(session.template_uses("consent_request"), 1u);
}

TEST_F(ConsentFlow, PriorInterestsPrefillRecommendation) {
  ProfileStore& store = assistant.profiles();
  store.create("ada", "Ada", {badge_token("ada")});
  store.record_consent("ada", Consent::granted);
  store.remember_interests("ada", {"recommendation"}, fixed_now());
  op("identify", {{"token", badge_token("ada")}});
  say("Can you recommend a session?");
  EXPECT_EQ(session.slot_string(slots::kConfStage), std::optional<std::string>("confirm_interests"));
  say("yes");
  const auto with = session.slot_string(slots::kConfCurrent);

  Session plain = assistant.engine().new_session(ChannelDescriptor::make(ChannelKind::robot));
  assistant.engine().handle_message(plain, "Can you recommend a session?", fixed_now());
  EXPECT_FALSE(plain.slot_string(slots::kConfCurrent));
  EXPECT_NE(with, plain.slot_string(slots::kConfCurrent));
  const auto* want =
      recommend_session(assistant.programme(), {{"recommendation"}, {}}, fixed_now());
  ASSERT_NE(want, nullptr);
  EXPECT_EQ(with, std::optional(want->id));
}

}  // namespace
}  // namespace confassist
