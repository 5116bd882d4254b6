#include <gtest/gtest.h>

#include "confassist/channel.hpp"
#include "confassist/error.hpp"
#include "confassist/gateway.hpp"
#include "clients.hpp"
#include "fixtures.hpp"
#include "scripts.hpp"

namespace confassist {
namespace {

using testing::RecordingConnection;
using json = nlohmann::json;

WireMessage msg(MessageType type, json payload = json::object(), std::int64_t seq = 0,
                std::string session = {}) {
  WireMessage m;
  m.type = type;
  m.payload = std::move(payload);
  m.seq = seq;
  m.session = std::move(session);
  return m;
}

std::vector<WireMessage> of_type(const std::vector<WireMessage>& frames, MessageType type) {
  std::vector<WireMessage> out;
  for (const auto& f : frames) {
    if (f.type == type) out.push_back(f);
  }
  return out;
}

std::string error_code(const std::vector<WireMessage>& frames) {
  const auto errors = of_type(frames, MessageType::error);
  return errors.empty() ? std::string() : errors.back().payload.value("code", "");
}

TEST(Render, PerChannel) {
  const ResponsePayload card = ItemCard{"Spice Route", "restaurant", 4.5, "$$", "Curries."};
  const auto rest = ChannelDescriptor::make(ChannelKind::rest).capabilities;
  const auto web = ChannelDescriptor::make(ChannelKind::webchat).capabilities;
  const auto screen = ChannelDescriptor::make(ChannelKind::screen).capabilities;
  EXPECT_EQ(render_for_channel(card, rest),
            ResponsePayload(TextPayload{"Spice Route — 4.5★ — $$ — Curries."}));
  EXPECT_EQ(render_for_channel(card, web), card);
  const ResponsePayload qr = QuickReplies{"Pick one", {"a", "b"}};
  EXPECT_EQ(render_for_channel(qr, screen), ResponsePayload(TextPayload{"Pick one"}));
  EXPECT_EQ(render_for_channel(qr, rest), ResponsePayload(TextPayload{"Pick one (a / b)"}));
  EXPECT_EQ(flatten_to_text(MapCard{"Park", 58.96998, 5.73311, "m", "Walk."}),
            "Park at 58.96998,5.73311: Walk.");
  EXPECT_EQ(flatten_to_text(ListCard{"Keynotes", {"A", "B"}}), "Keynotes\n1. A\n2. B");
  EXPECT_TRUE(screen.display_only);
  EXPECT_FALSE(rest.rich_cards);
  EXPECT_TRUE(ChannelDescriptor::make(ChannelKind::rest, true).capabilities.rich_cards);
}

TEST(Render, FlatteningIsTotalAndDeterministic) {
  const std::vector<ResponsePayload> all{
      TextPayload{"hi"}, ListCard{"t", {"x"}}, MapCard{"n", 1, 2, "r", "i"},
      ItemCard{"t", "s", 3.0, "$", "b"}, QuickReplies{"p", {"o"}}, IdentifyRequest{"scan"}};
  const auto robot = ChannelDescriptor::make(ChannelKind::robot).capabilities;
  for (const auto& p : all) {
    EXPECT_FALSE(flatten_to_text(p).empty());
    EXPECT_EQ(flatten_to_text(p), flatten_to_text(p));
    EXPECT_TRUE(std::holds_alternative<TextPayload>(render_for_channel(p, robot)));
    EXPECT_EQ(payload_from_json(to_json(p)), p);
  }
  EXPECT_THROW(validate(TextPayload{""}), Error);
  EXPECT_THROW(validate(QuickReplies{"p", {}}), Error);
  EXPECT_THROW(validate(QuickReplies{"p", {"1", "2", "3", "4", "5", "6", "7"}}), Error);
  EXPECT_THROW(validate(MapCard{"n", 91, 0, "r", "i"}), Error);
}

TEST(Render, RichDisplayOnceScreenJoins) {
  const auto robot = ChannelDescriptor::make(ChannelKind::robot);
  EXPECT_FALSE(group_has_rich_display({robot}));
  EXPECT_TRUE(group_has_rich_display({robot, ChannelDescriptor::make(ChannelKind::screen)}));
}

TEST(Wire, ParseErrors) {
  auto code = [](std::string_view text) {
    try {
      parse_wire(text);
    } catch (const WireError& e) {
      return e.code();
    }
    return std::string("ok");
  };
  EXPECT_EQ(code("{"), wire_error::kMalformed);
  EXPECT_EQ(code("[]"), wire_error::kMalformed);
  EXPECT_EQ(code(R"({"v":2,"type":"ping","payload":{}})"), wire_error::kUnsupportedVersion);
  EXPECT_EQ(code(R"({"v":1,"type":"dance","payload":{}})"), wire_error::kUnknownType);
  EXPECT_EQ(code(R"({"v":1,"type":"ping","seq":"x"})"), wire_error::kMalformed);
  EXPECT_EQ(code(R"({"v":1,"type":"ping","payload":{}})"), "ok");
  const auto m = msg(MessageType::user_utterance, {{"text", "hi"}}, 3, "s");
  EXPECT_EQ(parse_wire(serialize(m)), m);
}

class GatewayTest : public ::testing::Test {
 protected:
  Assistant assistant{testing::fixture_options()};
  GatewayOptions options = testing::fixture_gateway_options();
  std::unique_ptr<Gateway> gateway = std::make_unique<Gateway>(assistant, options);

  struct Client {
    std::shared_ptr<RecordingConnection> conn = std::make_shared<RecordingConnection>();
    ConnectionId id = 0;
    std::int64_t seq = 0;
    std::string session;
    std::string token;
  };

  Client connect() {
    Client c;
    c.id = gateway->attach(c.conn);
    return c;
  }

  std::vector<WireMessage> send(Client& c, WireMessage m) {
    gateway->on_message(c.id, m);
    return c.conn->take();
  }

  Client open(const std::string& channel) {
    Client c = connect();
    const auto out = send(c, msg(MessageType::session_open, {{"channel", channel}}));
    EXPECT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].type, MessageType::session_open);
    c.session = out[0].payload.value("session", "");
    c.token = out[0].payload.value("group_token", "");
    return c;
  }

  std::vector<WireMessage> join(Client& c, const std::string& token, const std::string& channel) {
    auto out = send(c, msg(MessageType::session_join, {{"group_token", token}, {"channel", channel}}));
    if (!out.empty() && out[0].type == MessageType::session_join) {
      c.session = out[0].payload.value("session", "");
    }
    return out;
  }

  std::vector<WireMessage> utter(Client& c, const std::string& text) {
    return send(c, msg(MessageType::user_utterance, {{"text", text}}, ++c.seq, c.session));
  }
};

TEST_F(GatewayTest, HelloAndPing) {
  auto c = connect();
  const auto hello = send(c, msg(MessageType::hello, {{"channel", "robot"}}));
  ASSERT_EQ(hello.size(), 1u);
  EXPECT_EQ(hello[0].payload["version"], 1);
  const auto pong = send(c, msg(MessageType::ping, {{"n", 7}}));
  ASSERT_EQ(pong.size(), 1u);
  EXPECT_EQ(pong[0].type, MessageType::pong);
  EXPECT_EQ(pong[0].payload["n"], 7);
  const auto opened = send(c, msg(MessageType::session_open));
  EXPECT_EQ(opened.at(0).payload["channel"], "robot");
}

TEST_F(GatewayTest, OpenGivesDistinctSessionsAndTokens) {
  auto a = connect();
  auto b = connect();
  const auto x = send(a, msg(MessageType::session_open));
  const auto y = send(b, msg(MessageType::session_open));
  EXPECT_NE(x[0].payload["session"], y[0].payload["session"]);
  EXPECT_NE(x[0].payload["group_token"], y[0].payload["group_token"]);
  EXPECT_EQ(gateway->session_count(), 2u);
}

TEST_F(GatewayTest, RandomGroupTokensAreLongHex) {
  GatewayOptions o;
  Gateway g(assistant, o);
  const auto reply = g.post_message(std::nullopt, "hi");
  ASSERT_TRUE(reply.group_token);
  EXPECT_EQ(reply.group_token->size(), 32u);
  EXPECT_EQ(reply.group_token->find_first_not_of("0123456789abcdef"), std::string::npos);
}

TEST_F(GatewayTest, Capacity) {
  options.capacity = 1;
  gateway = std::make_unique<Gateway>(assistant, options);
  open("webchat");
  auto b = connect();
  const auto out = send(b, msg(MessageType::session_open));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(error_code(out), wire_error::kCapacity);
  EXPECT_EQ(out[0].payload["retry_after_ms"], 5000);
  try {
    gateway->post_message(std::nullopt, "hi");
    FAIL();
  } catch (const WireError& e) {
    EXPECT_EQ(e.code(), wire_error::kCapacity);
    EXPECT_EQ(e.retry_after_ms(), 5000);
  }
}

TEST_F(GatewayTest, UtteranceBroadcastsGreeting) {
  auto c = open("webchat");
  const auto out = utter(c, "hi");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].type, MessageType::bot_response);
  EXPECT_EQ(out[0].seq, 1);
  EXPECT_EQ(out[0].payload["turn"], 1);
  EXPECT_EQ(out[0].payload["skill"], "core");
  EXPECT_EQ(out[0].session, c.session);
}

TEST_F(GatewayTest, MalformedKeepsSession) {
  auto c = open("webchat");
  gateway->on_frame(c.id, "{not json");
  EXPECT_EQ(error_code(c.conn->take()), wire_error::kMalformed);
  gateway->on_frame(c.id, R"({"v":1,"type":"dance","payload":{}})");
  EXPECT_EQ(error_code(c.conn->take()), wire_error::kUnknownType);
  gateway->on_frame(c.id, R"({"v":9,"type":"ping","payload":{}})");
  EXPECT_EQ(error_code(c.conn->take()), wire_error::kUnsupportedVersion);
  EXPECT_EQ(error_code(send(c, msg(MessageType::user_utterance, {{"text", 5}}, ++c.seq))),
            wire_error::kMalformed);
  const auto ok = utter(c, "hi");
  EXPECT_EQ(of_type(ok, MessageType::bot_response).size(), 1u);
}

TEST_F(GatewayTest, ProtocolErrors) {
  auto c = connect();
  EXPECT_EQ(error_code(send(c, msg(MessageType::user_utterance, {{"text", "hi"}}, 1))),
            wire_error::kProtocol);
  EXPECT_EQ(error_code(send(c, msg(MessageType::bot_response))), wire_error::kProtocol);
  auto d = open("webchat");
  EXPECT_EQ(error_code(send(d, msg(MessageType::user_utterance, {{"text", "hi"}}, 1, "s-999999"))),
            wire_error::kUnknownSession);
  EXPECT_EQ(error_code(send(d, msg(MessageType::consent, {{"decision", "granted"}}, 2))),
            wire_error::kProtocol);
}

TEST_F(GatewayTest, OutOfOrder) {
  auto c = open("webchat");
  utter(c, "hi");
  EXPECT_EQ(error_code(send(c, msg(MessageType::user_utterance, {{"text", "hi"}}, 1))),
            wire_error::kOutOfOrder);
  EXPECT_EQ(error_code(send(c, msg(MessageType::user_utterance, {{"text", "hi"}}, 0))),
            wire_error::kOutOfOrder);
  EXPECT_EQ(of_type(send(c, msg(MessageType::user_utterance, {{"text", "hi"}}, 5)),
                    MessageType::bot_response)
                .size(),
            1u);
}

TEST_F(GatewayTest, GroupJoinAndLimits) {
  auto robot = open("robot");
  const auto token = robot.token;
  auto screen = connect();
  const auto joined = join(screen, token, "screen");
  ASSERT_EQ(joined.at(0).type, MessageType::session_join);
  EXPECT_TRUE(joined[0].payload["rich_display"].get<bool>());
  EXPECT_EQ(screen.session, robot.session);

  auto second = connect();
  EXPECT_EQ(error_code(join(second, token, "screen")), wire_error::kGroupFull);
  auto stale = connect();
  EXPECT_EQ(error_code(join(stale, "g-nope", "screen")), wire_error::kUnknownGroup);
  EXPECT_EQ(error_code(send(screen, msg(MessageType::user_utterance, {{"text", "hi"}}, 1))),
            wire_error::kReadOnly);
  auto display_open = connect();
  EXPECT_EQ(error_code(send(display_open, msg(MessageType::session_open, {{"channel", "screen"}}))),
            wire_error::kReadOnly);
}

TEST_F(GatewayTest, BroadcastConsistencyAndReplay) {
  auto robot = open("robot");
  const auto token = robot.token;
  utter(robot, "Hello");
  const auto turn = utter(robot, "Who are the conference's keynote speakers?");
  ASSERT_GE(turn.size(), 1u);

  auto screen = connect();
  const auto joined = join(screen, token, "screen");
  const auto replayed = of_type(joined, MessageType::bot_response);
  ASSERT_EQ(replayed.size(), turn.size());
  for (std::size_t i = 0; i < turn.size(); ++i) {
    EXPECT_EQ(replayed[i].seq, turn[i].seq);
    EXPECT_EQ(replayed[i].payload["turn"], turn[i].payload["turn"]);
  }
  // The screen gets the rich list, the robot its text flattening.
  EXPECT_EQ(replayed.back().payload["content"]["kind"], "list_card");
  EXPECT_EQ(turn.back().payload["content"]["kind"], "text");

  std::int64_t last = turn.back().seq;
  for (const auto& text : testing::sync_script()) {
    const auto r = utter(robot, text);
    const auto s = screen.conn->take();
    const auto rb = of_type(r, MessageType::bot_response);
    ASSERT_FALSE(rb.empty()) << text;
    ASSERT_EQ(rb.size(), s.size()) << text;
    for (std::size_t i = 0; i < rb.size(); ++i) {
      ASSERT_EQ(rb[i].seq, s[i].seq);
      ASSERT_EQ(rb[i].payload["turn"], s[i].payload["turn"]);
      ASSERT_EQ(rb[i].payload["skill"], s[i].payload["skill"]);
      ASSERT_GT(rb[i].seq, last);
      last = rb[i].seq;
    }
  }
}

TEST_F(GatewayTest, RestAndSocketShareSequence) {
  const auto reply = gateway->post_message(std::nullopt, "Hello");
  auto screen = connect();
  const auto joined = join(screen, *reply.group_token, "screen");
  EXPECT_EQ(of_type(joined, MessageType::bot_response).at(0).seq, 1);
  gateway->post_message(reply.session, "thanks");
  const auto frames = screen.conn->take();
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].seq, 2);
  EXPECT_THROW(gateway->post_message("s-404", "hi"), WireError);
  EXPECT_THROW(gateway->post_message(std::nullopt, 42), WireError);
}

TEST_F(GatewayTest, ReconnectKeepsSeqMonotonic) {
  auto robot = open("robot");
  const auto token = robot.token;
  utter(robot, "hi");
  utter(robot, "thanks");
  gateway->detach(robot.id);
  auto again = connect();
  again.seq = 0;
  ASSERT_EQ(join(again, token, "robot").at(0).type, MessageType::session_join);
  EXPECT_EQ(error_code(send(again, msg(MessageType::user_utterance, {{"text", "hi"}}, 1))),
            wire_error::kOutOfOrder);
  const auto out = send(again, msg(MessageType::user_utterance, {{"text", "hi"}}, 3));
  EXPECT_EQ(of_type(out, MessageType::bot_response).at(0).seq, 3);
}

TEST_F(GatewayTest, NoDeadAir) {
  auto c = open("webchat");
  for (const auto& text : testing::utterance_pool()) {
    EXPECT_FALSE(of_type(utter(c, text), MessageType::bot_response).empty()) << text;
  }
}

TEST_F(GatewayTest, IdleExpiry) {
  auto now = std::make_shared<Instant>(testing::fixed_now());
  options.clock = [now] { return *now; };
  options.session_ttl = std::chrono::seconds(60);
  options.capacity = 1;
  gateway = std::make_unique<Gateway>(assistant, options);
  const auto reply = gateway->post_message(std::nullopt, "hi");
  *now += std::chrono::seconds(30);
  EXPECT_EQ(gateway->expire_idle(), 0u);
  *now += std::chrono::seconds(31);
  // Opening at capacity sweeps idle sessions first.
  EXPECT_NO_THROW(gateway->post_message(std::nullopt, "hi"));
  EXPECT_THROW(gateway->post_message(reply.session, "hi"), WireError);
  EXPECT_EQ(gateway->session_count(), 1u);
}

TEST_F(GatewayTest, MembersKeepSessionsAlive) {
  auto now = std::make_shared<Instant>(testing::fixed_now());
  options.clock = [now] { return *now; };
  options.session_ttl = std::chrono::seconds(1);
  gateway = std::make_unique<Gateway>(assistant, options);
  auto c = open("webchat");
  *now += std::chrono::hours(1);
  EXPECT_EQ(gateway->expire_idle(), 0u);
  gateway->detach(c.id);
  *now += std::chrono::hours(1);
  EXPECT_EQ(gateway->expire_idle(), 1u);
}

TEST_F(GatewayTest, TranscriptAndHealth) {
  const auto reply = gateway->post_message(std::nullopt, "Hello");
  const auto t = gateway->transcript(reply.session);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->size(), 2u);
  EXPECT_FALSE(gateway->transcript("s-404"));
  const auto h = gateway->health();
  EXPECT_EQ(h["status"], "ok");
  EXPECT_EQ(h["sessions"], 1);
}

}  // namespace
}  // namespace confassist
