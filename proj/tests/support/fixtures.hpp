#pragma once

#include <filesystem>
#include <string>

#include "confassist/assistant.hpp"
#include "confassist/gateway.hpp"
#include "confassist/time.hpp"

namespace confassist::testing {

std::filesystem::path data_dir();
std::string data_file(const std::string& name);
std::filesystem::path golden_dir();

// 2026-06-15T08:30:00Z, half an hour before the first event of prog_small.
Instant fixed_now();
Clock fixed_clock();

// Shipped corpus and dialogue with poi_small and prog_small, sequential
// session ids, in-memory stores unless state_dir is given.
AssistantOptions fixture_options(std::optional<std::filesystem::path> state_dir = std::nullopt,
                                 const std::string& catalog = "poi_small.json");

// Fixed clock and sequential group tokens.
GatewayOptions fixture_gateway_options();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "confassist");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace confassist::testing
