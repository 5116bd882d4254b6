#include "fixtures.hpp"

#include <random>

#include "confassist/ids.hpp"

#ifndef CONFASSIST_TEST_DATA_DIR
#error "CONFASSIST_TEST_DATA_DIR must be defined"
#endif
#ifndef CONFASSIST_TEST_GOLDEN_DIR
#error "CONFASSIST_TEST_GOLDEN_DIR must be defined"
#endif

namespace confassist::testing {

std::filesystem::path data_dir() { return CONFASSIST_TEST_DATA_DIR; }

std::string data_file(const std::string& name) { return (data_dir() / name).string(); }

std::filesystem::path golden_dir() { return CONFASSIST_TEST_GOLDEN_DIR; }

Instant fixed_now() { return parse_rfc3339("2026-06-15T08:30:00Z"); }

Clock fixed_clock() {
  return [] { return fixed_now(); };
}

AssistantOptions fixture_options(std::optional<std::filesystem::path> state_dir,
                                 const std::string& catalog) {
  AssistantOptions o;
  o.corpus_path = data_file("nlu_corpus.json");
  o.dialogue_path = data_file("dialogue.json");
  o.poi_catalog_path = data_file(catalog);
  o.programme_path = data_file("prog_small.json");
  o.state_dir = std::move(state_dir);
  o.session_ids = sequential_ids("s-");
  return o;
}

GatewayOptions fixture_gateway_options() {
  GatewayOptions o;
  o.clock = fixed_clock();
  o.group_tokens = sequential_ids("g-");
  return o;
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  do {
    path_ = base / (tag + "-" + std::to_string(rd()));
  } while (std::filesystem::exists(path_));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace confassist::testing
