#include "confassist/assistant.hpp"

#include "confassist/text.hpp"

namespace confassist {

std::vector<Gazetteer> programme_gazetteers(const Programme& programme) {
  Gazetteer speakers{"speaker", {}};
  for (const auto& name : programme.speakers()) {
    speakers.entries.emplace_back(to_lower(name), name);
  }
  Gazetteer rooms{"room", {}};
  for (const auto& room : programme.rooms()) rooms.entries.emplace_back(to_lower(room), room);
  std::vector<Gazetteer> out;
  if (!speakers.entries.empty()) out.push_back(std::move(speakers));
  if (!rooms.entries.empty()) out.push_back(std::move(rooms));
  return out;
}

Assistant::Assistant(const AssistantOptions& options) {
  catalog_ = std::make_shared<const PoiCatalog>(PoiCatalog::load(options.poi_catalog_path));
  programme_ = std::make_shared<const Programme>(Programme::load(options.programme_path));

  auto corpus = load_corpus(options.corpus_path);
  for (auto& g : programme_gazetteers(*programme_)) corpus.gazetteers.push_back(std::move(g));
  model_ = std::make_shared<const NluModel>(
      NluModel::compile(std::move(corpus.intents), std::move(corpus.gazetteers),
                        options.threshold));

  if (options.state_dir) {
    logs_ = std::make_unique<LogStore>(*options.state_dir);
    profiles_ = std::make_unique<ProfileStore>(*options.state_dir);
  } else {
    logs_ = std::make_unique<LogStore>();
    profiles_ = std::make_unique<ProfileStore>();
  }

  SkillRegistry registry;
  registry.register_skill(SkillDescriptor::of(std::make_shared<CoreSkill>()));
  registry.register_skill(
      SkillDescriptor::of(std::make_shared<PoiSkill>(catalog_, options.map_url_template)));
  registry.register_skill(SkillDescriptor::of(std::make_shared<ConferenceSkill>(programme_)));

  DialogueEngine::Options engine_options;
  engine_options.session_ids = options.session_ids;
  engine_options.profiles = profiles_.get();
  engine_options.log = logs_.get();
  engine_ = std::make_unique<DialogueEngine>(model_, DialogueConfig::load(options.dialogue_path),
                                             std::move(registry), std::move(engine_options));
}

}  // namespace confassist
