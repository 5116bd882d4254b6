#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "confassist/assistant.hpp"
#include "confassist/config.hpp"
#include "confassist/error.hpp"
#include "confassist/gateway.hpp"
#include "confassist/logstore.hpp"
#include "confassist/profile.hpp"
#include "confassist/server.hpp"

namespace confassist::cli {

namespace {

struct ServeFlags {
  std::string config;
  std::string poi_catalog;
  std::string programme;
  std::string corpus;
  std::string dialogue;
  std::string log_dir;
  std::string static_dir;
  std::optional<std::uint16_t> port;
  std::string now;
};

ServerConfig resolve_config(const ServeFlags& f) {
  ServerConfig c = f.config.empty() ? ServerConfig{} : ServerConfig::load(f.config);
  c.apply_env([](const char* name) { return std::getenv(name); });
  if (!f.poi_catalog.empty()) c.poi_catalog = f.poi_catalog;
  if (!f.programme.empty()) c.programme = f.programme;
  if (!f.corpus.empty()) c.corpus = f.corpus;
  if (!f.dialogue.empty()) c.dialogue = f.dialogue;
  if (!f.log_dir.empty()) c.log_dir = std::filesystem::path(f.log_dir);
  if (!f.static_dir.empty()) c.static_dir = f.static_dir;
  if (f.port) c.port = *f.port;
  c.validate();
  return c;
}

void add_serve_flags(CLI::App* cmd, ServeFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--poi-catalog", f.poi_catalog, "POI catalog JSON");
  cmd->add_option("--programme", f.programme, "Conference programme JSON");
  cmd->add_option("--corpus", f.corpus, "NLU corpus JSON");
  cmd->add_option("--dialogue", f.dialogue, "Dialogue config JSON");
  cmd->add_option("--log-dir", f.log_dir, "Directory for conversation logs and profiles");
}

int serve(const ServeFlags& flags, std::ostream& out) {
  const auto config = resolve_config(flags);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Assistant assistant(config.assistant_options());
  Gateway gateway(assistant, config.gateway_options());
  Server server(gateway, config.server_options());
  server.start();
  out << "listening on " << config.host << ':' << server.port() << std::endl;

  int signal = 0;
  sigwait(&signals, &signal);
  spdlog::info("signal {}; shutting down", signal);
  server.stop();
  return 0;
}

int chat(const ServeFlags& flags, std::istream& in, std::ostream& out) {
  const auto config = resolve_config(flags);
  Assistant assistant(config.assistant_options());
  const auto& engine = assistant.engine();
  auto session = engine.new_session(ChannelDescriptor::make(ChannelKind::rest));
  const std::optional<Instant> fixed =
      flags.now.empty() ? std::nullopt : std::optional<Instant>(parse_rfc3339(flags.now));
  std::string line;
  out << "> " << std::flush;
  while (std::getline(in, line)) {
    for (const auto& r : engine.handle_message(session, line, fixed.value_or(system_now()))) {
      out << flatten_to_text(r.payload) << '\n';
    }
    out << "> " << std::flush;
  }
  out << '\n';
  return 0;
}

void print_table(std::ostream& out, const std::string& left, const std::string& right,
                 const std::vector<std::pair<std::string, int>>& rows) {
  std::size_t width = left.size();
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  out << std::left << std::setw(static_cast<int>(width) + 2) << left << right << '\n';
  for (const auto& [k, v] : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  }
}

int analytics(const std::string& dir, bool histogram, bool skills, const std::string& format,
              std::ostream& out) {
  if (!histogram && !skills) histogram = skills = true;
  const auto records = LogStore::load(dir);
  const auto lengths = conversation_length_histogram(records);
  const auto per_skill = turns_per_skill(records);
  if (format == "json") {
    nlohmann::json doc = nlohmann::json::object();
    if (histogram) {
      nlohmann::json h = nlohmann::json::object();
      for (const auto& [len, n] : lengths) h[std::to_string(len)] = n;
      doc["conversation_length_histogram"] = h;
    }
    if (skills) doc["turns_per_skill"] = per_skill;
    out << doc.dump(2) << '\n';
    return 0;
  }
  if (histogram) {
    std::vector<std::pair<std::string, int>> rows;
    for (const auto& [len, n] : lengths) rows.emplace_back(std::to_string(len), n);
    print_table(out, "turns", "sessions", rows);
  }
  if (histogram && skills) out << '\n';
  if (skills) {
    std::vector<std::pair<std::string, int>> rows(per_skill.begin(), per_skill.end());
    print_table(out, "skill", "turns", rows);
  }
  return 0;
}

int delete_profile(const std::string& dir, const std::string& user_id, std::ostream& out,
                   std::ostream& err) {
  ProfileStore profiles{std::filesystem::path(dir)};
  const auto profile = profiles.find(user_id);
  if (!profile) {
    err << "no profile '" << user_id << "'\n";
    return 1;
  }
  LogStore logs{std::filesystem::path(dir)};
  const auto scrubbed = logs.scrub_user(user_id, profile->display_name.value_or(""));
  profiles.remove(user_id, system_now());
  out << "deleted " << user_id << "; scrubbed " << scrubbed << " log records\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conference assistant server and admin tools", "confassist"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CONFASSIST_VERSION));

  ServeFlags serve_flags;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/WebSocket server");
  add_serve_flags(serve_cmd, serve_flags);
  serve_cmd->add_option("--static-dir", serve_flags.static_dir, "Directory served at /chat");
  serve_cmd->add_option("--port", serve_flags.port, "TCP port (0 picks a free one)");

  ServeFlags chat_flags;
  auto* chat_cmd = app.add_subcommand("chat", "Talk to the assistant on stdin/stdout");
  add_serve_flags(chat_cmd, chat_flags);
  chat_cmd->add_option("--now", chat_flags.now, "Pretend the time is this RFC 3339 instant");

  std::string log_dir;
  bool histogram = false;
  bool skills = false;
  std::string format = "table";
  auto* analytics_cmd = app.add_subcommand("analytics", "Summarize conversation logs");
  analytics_cmd->add_option("--log-dir", log_dir, "Log directory")->required()->check(
      CLI::ExistingDirectory);
  auto* hflag = analytics_cmd->add_flag("--histogram", histogram, "Conversation lengths");
  auto* sflag = analytics_cmd->add_flag("--skills", skills, "Bot turns per skill");
  hflag->excludes(sflag);
  analytics_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "table"}));

  std::string profiles_dir;
  auto* profiles_cmd = app.add_subcommand("profiles", "Manage user profiles");
  profiles_cmd->require_subcommand(1);
  profiles_cmd->add_option("--log-dir", profiles_dir, "State directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  std::string user_id;
  auto* delete_cmd =
      profiles_cmd->add_subcommand("delete", "Delete a profile and scrub its log attribution");
  delete_cmd->add_option("user_id", user_id)->required();
  std::string export_path;
  auto* export_cmd = profiles_cmd->add_subcommand("export", "Write all profiles as JSON");
  export_cmd->add_option("-o,--output", export_path, "Output file (stdout when omitted)");
  std::string import_path;
  auto* import_cmd = profiles_cmd->add_subcommand("import", "Merge profiles from JSON");
  import_cmd->add_option("file", import_path)->required()->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*serve_cmd) return serve(serve_flags, out);
    if (*chat_cmd) return chat(chat_flags, std::cin, out);
    if (*analytics_cmd) return analytics(log_dir, histogram, skills, format, out);
    if (*delete_cmd) return delete_profile(profiles_dir, user_id, out, err);
    if (*export_cmd) {
      const auto doc = ProfileStore{std::filesystem::path(profiles_dir)}.export_json();
      if (export_path.empty()) {
        out << doc.dump(2) << '\n';
      } else {
        std::ofstream(export_path) << doc.dump(2) << '\n';
      }
      return 0;
    }
    if (*import_cmd) {
      std::ifstream in(import_path);
      const auto doc = nlohmann::json::parse(in, nullptr, false);
      if (doc.is_discarded()) {
        err << import_path << " is not JSON\n";
        return 1;
      }
      ProfileStore{std::filesystem::path(profiles_dir)}.import_json(doc, system_now());
      out << "imported " << import_path << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace confassist::cli
