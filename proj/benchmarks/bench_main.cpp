#include <benchmark/benchmark.h>

#include <random>

#include "confassist/assistant.hpp"

namespace ca = confassist;

namespace {

const std::filesystem::path kData = CONFASSIST_BENCH_DATA_DIR;

const ca::NluModel& model() {
  static const ca::NluModel m = [] {
    auto corpus = ca::load_corpus(kData / "nlu_corpus.json");
    for (auto& g : ca::programme_gazetteers(ca::Programme::load(kData / "prog_small.json"))) {
      corpus.gazetteers.push_back(g);
    }
    return ca::NluModel::compile(corpus.intents, corpus.gazetteers);
  }();
  return m;
}

void BM_Classify(benchmark::State& state) {
  const std::vector<std::string> inputs{
      "Do you know of any good Indian restaurants?",
      "Who are the conference's keynote speakers?",
      "how do I get there by bus",
      "xqzzy blorp",
      "What's on in Room A on day two?"};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model().classify(inputs[i++ % inputs.size()]));
  }
}
BENCHMARK(BM_Classify);

ca::PoiCatalog synthetic_catalog(std::size_t n) {
  const std::vector<std::string> words{"indian", "italian", "pizza", "cheap", "outdoor",
                                       "kids",   "history", "wine",  "spicy", "vegan"};
  std::mt19937 rng(7);
  std::vector<ca::PoiItem> items;
  for (std::size_t k = 0; k < n; ++k) {
    ca::PoiItem item;
    item.id = "poi-" + std::to_string(k);
    item.name = "Place " + std::to_string(k);
    item.category = static_cast<ca::PoiCategory>(rng() % 3);
    item.keywords = {words[rng() % words.size()], words[rng() % words.size()]};
    item.price_level = 1 + static_cast<int>(rng() % 4);
    item.rating = 1.0 + static_cast<double>(rng() % 41) / 10.0;
    item.review_count = static_cast<int>(rng() % 500);
    item.address = "Street " + std::to_string(k);
    item.transport_options = {{ca::TransportMode::walk, "Walk.", 5 + static_cast<int>(rng() % 20)}};
    item.description = "Somewhere.";
    items.push_back(std::move(item));
  }
  return ca::PoiCatalog(std::move(items));
}

void BM_RecommendPoi(benchmark::State& state) {
  const auto catalog = synthetic_catalog(static_cast<std::size_t>(state.range(0)));
  ca::PoiPreferences prefs;
  prefs.category = ca::PoiCategory::restaurant;
  prefs.like("indian");
  prefs.dislike("cheap");
  for (auto _ : state) benchmark::DoNotOptimize(ca::recommend(catalog, prefs));
}
BENCHMARK(BM_RecommendPoi)->Arg(5)->Arg(50)->Arg(500);

void BM_RecommendSession(benchmark::State& state) {
  const auto programme = ca::Programme::load(kData / "prog_small.json");
  const ca::InterestProfile profile{{"recommendation", "music", "privacy"}, {}};
  const auto now = ca::parse_rfc3339("2026-06-15T08:30:00Z");
  for (auto _ : state) benchmark::DoNotOptimize(ca::recommend_session(programme, profile, now));
}
BENCHMARK(BM_RecommendSession);

void BM_DialogueTurn(benchmark::State& state) {
  ca::AssistantOptions options;
  options.corpus_path = (kData / "nlu_corpus.json").string();
  options.dialogue_path = (kData / "dialogue.json").string();
  options.poi_catalog_path = (kData / "poi_small.json").string();
  options.programme_path = (kData / "prog_small.json").string();
  ca::Assistant assistant(options);
  const auto now = ca::parse_rfc3339("2026-06-15T08:30:00Z");
  const std::vector<std::string> script{"Hello", "Do you know of any good Indian restaurants?",
                                        "Not Italian, please.", "Sounds great!",
                                        "How do I get there?", "Bye!"};
  for (auto _ : state) {
    auto session = assistant.engine().new_session(ca::ChannelDescriptor::make(ca::ChannelKind::webchat));
    for (const auto& text : script) {
      benchmark::DoNotOptimize(assistant.engine().handle_message(session, text, now));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(script.size()));
}
BENCHMARK(BM_DialogueTurn);

}  // namespace
BENCHMARK_MAIN();
