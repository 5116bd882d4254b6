#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "confassist/builtin_skills.hpp"
#include "confassist/conference.hpp"
#include "confassist/dialogue.hpp"
#include "confassist/logstore.hpp"
#include "confassist/nlu.hpp"
#include "confassist/poi.hpp"
#include "confassist/profile.hpp"

namespace confassist {

struct AssistantOptions {
  std::string corpus_path;
  std::string dialogue_path;
  std::string poi_catalog_path;
  std::string programme_path;
  double threshold = kDefaultThreshold;
  std::string map_url_template = "https://maps.example.org/static?center={lat},{lon}&zoom=16";
  // Conversation logs and profiles live here; in memory when unset.
  std::optional<std::filesystem::path> state_dir;
  // Random "s-" ids when empty.
  IdGenerator session_ids;
};

// "speaker" and "room" gazetteers generated from the programme.
std::vector<Gazetteer> programme_gazetteers(const Programme& programme);

// Everything one server instance needs: model, skills, engine and stores.
class Assistant {
 public:
  explicit Assistant(const AssistantOptions& options);

  const DialogueEngine& engine() const { return *engine_; }
  const NluModel& model() const { return *model_; }
  const PoiCatalog& catalog() const { return *catalog_; }
  const Programme& programme() const { return *programme_; }
  LogStore& logs() { return *logs_; }
  ProfileStore& profiles() { return *profiles_; }

 private:
  std::shared_ptr<const NluModel> model_;
  std::shared_ptr<const PoiCatalog> catalog_;
  std::shared_ptr<const Programme> programme_;
  std::unique_ptr<LogStore> logs_;
  std::unique_ptr<ProfileStore> profiles_;
  std::unique_ptr<DialogueEngine> engine_;
};

}  // namespace confassist
