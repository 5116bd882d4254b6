#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "confassist/config.hpp"
#include "confassist/error.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

namespace confassist {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(ServerConfig, ShippedFileLoads) {
  const auto c = ServerConfig::load(testing::data_file("server.json"));
  EXPECT_EQ(c.port, 8080);
  EXPECT_TRUE(fs::exists(c.corpus));
  EXPECT_TRUE(fs::exists(c.programme));
  EXPECT_TRUE(c.corpus.is_absolute() || fs::exists(c.corpus));
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.gateway_options().capacity, 1000u);
}

TEST(ServerConfig, RelativePathsResolveAgainstFile) {
  const auto c = ServerConfig::from_json(
      {{"schema_version", 1}, {"corpus", "c.json"}, {"log_dir", "../logs"}}, "/etc/confassist");
  EXPECT_EQ(c.corpus, fs::path("/etc/confassist/c.json"));
  EXPECT_EQ(c.log_dir, fs::path("/etc/confassist/../logs"));
}

TEST(ServerConfig, RejectsBadDocuments) {
  auto code = [](const json& doc) {
    try {
      ServerConfig::from_json(doc, "/");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::storage;
  };
  EXPECT_EQ(code({{"prot", 1}}), ErrorCode::schema_violation);
  EXPECT_EQ(code({{"port", "eighty"}}), ErrorCode::schema_violation);
  EXPECT_EQ(code(json::array()), ErrorCode::schema_violation);
  EXPECT_THROW(ServerConfig::load("/nonexistent/server.json"), Error);

  ServerConfig c;
  EXPECT_THROW(c.validate(), Error);
  c = ServerConfig::load(testing::data_file("server.json"));
  c.threshold = 1.5;
  EXPECT_THROW(c.validate(), Error);
}

TEST(ServerConfig, EnvironmentOverrides) {
  auto c = ServerConfig::load(testing::data_file("server.json"));
  const std::map<std::string, std::string> env{{"CONFASSIST_PORT", "9001"},
                                               {"CONFASSIST_THRESHOLD", "0.4"},
                                               {"CONFASSIST_CAPACITY", "3"},
                                               {"CONFASSIST_ADMIN_TOKEN", "tok"},
                                               {"CONFASSIST_REST_RICH_CARDS", "true"},
                                               {"CONFASSIST_SESSION_TTL", "90"}};
  c.apply_env([&](const char* name) -> const char* {
    const auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  EXPECT_EQ(c.port, 9001);
  EXPECT_DOUBLE_EQ(c.threshold, 0.4);
  EXPECT_EQ(c.capacity, 3u);
  EXPECT_EQ(c.server_options().admin_token, "tok");
  EXPECT_TRUE(c.gateway_options().rest_rich_cards);
  EXPECT_EQ(c.gateway_options().session_ttl, std::chrono::seconds(90));
  EXPECT_DOUBLE_EQ(c.assistant_options().threshold, 0.4);

  EXPECT_THROW(c.apply_env([](const char* name) -> const char* {
    return std::string(name) == "CONFASSIST_PORT" ? "http" : nullptr;
  }),
               Error);
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(cli({}).code, 0);
  EXPECT_NE(cli({"fly"}).code, 0);
  EXPECT_NE(cli({"analytics"}).code, 0);
  EXPECT_NE(cli({"analytics", "--log-dir", "/nonexistent/dir"}).code, 0);
  const auto version = cli({"--version"});
  EXPECT_EQ(version.code, 0);
  EXPECT_NE(version.out.find('.'), std::string::npos);
}

TEST(Cli, AnalyticsJsonAndTable) {
  testing::TempDir dir;
  {
    LogStore store(dir.path());
    for (const auto& r : testing::plant_records(
             {{"a", {{"core"}, {"poi", "poi"}}}, {"b", {{"core"}, {"core"}}}, {"c", {{"conference"}}}},
             testing::fixed_now())) {
      store.append(r);
    }
  }
  const auto j = cli({"analytics", "--log-dir", dir.path().string(), "--format", "json"});
  ASSERT_EQ(j.code, 0) << j.err;
  const auto doc = json::parse(j.out);
  EXPECT_EQ(doc["conversation_length_histogram"], (json{{"1", 1}, {"2", 2}}));
  EXPECT_EQ(doc["turns_per_skill"], (json{{"conference", 1}, {"core", 3}, {"poi", 2}}));

  const auto t = cli({"analytics", "--log-dir", dir.path().string(), "--skills"});
  ASSERT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("skill"), std::string::npos);
  EXPECT_NE(t.out.find("core"), std::string::npos);
  EXPECT_EQ(t.out.find("sessions"), std::string::npos);

  const auto h = cli({"analytics", "--log-dir", dir.path().string(), "--histogram", "--format",
                      "json"});
  EXPECT_FALSE(json::parse(h.out).contains("turns_per_skill"));
}

TEST(Cli, ProfilesDeleteScrubsAttribution) {
  testing::TempDir dir;
  {
    Assistant a(testing::fixture_options(dir.path()));
    Session s = a.engine().new_session(ChannelDescriptor::make(ChannelKind::robot));
    a.engine().run_operation(s, "core", "identify",
                             {{"token", badge_token("ada")}, {"name", "Ada"}}, testing::fixed_now());
    a.engine().handle_message(s, "yes", testing::fixed_now());
    a.engine().handle_message(s, "Hello", testing::fixed_now());
  }
  bool attributed = false;
  for (const auto& r : LogStore::load(dir.path())) attributed = attributed || r.user_id;
  ASSERT_TRUE(attributed);

  const auto res = cli({"profiles", "--log-dir", dir.path().string(), "delete", "ada"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_NE(res.out.find("deleted ada"), std::string::npos);
  for (const auto& r : LogStore::load(dir.path())) {
    EXPECT_FALSE(r.user_id);
    EXPECT_EQ(r.text.find("Ada"), std::string::npos) << r.text;
  }
  ProfileStore store(dir.path());
  EXPECT_FALSE(store.find("ada"));
  EXPECT_EQ(store.audit().back().op, "delete");
  EXPECT_EQ(cli({"profiles", "--log-dir", dir.path().string(), "delete", "ada"}).code, 1);
}

TEST(Cli, ProfilesExportImport) {
  testing::TempDir src, dst;
  {
    ProfileStore store(src.path());
    store.create("ada", "Ada", {badge_token("ada")});
  }
  const auto file = (src.path() / "export.json").string();
  ASSERT_EQ(cli({"profiles", "--log-dir", src.path().string(), "export", "-o", file}).code, 0);
  ASSERT_EQ(cli({"profiles", "--log-dir", dst.path().string(), "import", file}).code, 0);
  EXPECT_EQ(ProfileStore(dst.path()).find("ada")->display_name, std::optional<std::string>("Ada"));
  const auto out = cli({"profiles", "--log-dir", dst.path().string(), "export"});
  EXPECT_NE(out.out.find("\"ada\""), std::string::npos);
}

}  // namespace
}  // namespace confassist
