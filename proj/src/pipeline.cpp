#include "scenegen/pipeline.hpp"

#include "scenegen/error.hpp"

#ifndef SCENEGEN_DATA_DIR
#define SCENEGEN_DATA_DIR "data"
#endif

namespace scenegen {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SCENEGEN_DATA_DIR"); env && *env) return env;
  return SCENEGEN_DATA_DIR;
}

Resources Resources::load(const std::filesystem::path& data_dir) {
  return {AssetCatalog::load(data_dir / "catalog.json"), EmojiVocabulary::load(data_dir / "emoji_vocab.txt"),
          data_dir / "templates", data_dir / "oracle_templates.json"};
}

Scene solve_plan(const RoomPlan& plan, PlacementOracle& oracle, const EmojiVocabulary& vocabulary,
                 const SearchConfig& config, SearchTrace trace) {
  config.validate();
  if (config.mode == SearchMode::IO) {
    IoOutcome io = run_io_mode(plan, oracle);
    trace.append(io.trace);
    Scene scene;
    scene.plan = plan;
    const auto offsets = region_offsets(plan);
    for (std::size_t i = 0; i < plan.regions.size(); ++i) {
      scene.regions.push_back({plan.regions[i].id, offsets[i], RegionStatus::Io});
    }
    scene.placements = std::move(io.placed);
    scene.mode = config.mode;
    scene.seed = config.seed;
    scene.trace = std::move(trace);
    return scene;
  }

  const SearchContext ctx{oracle, vocabulary, config};
  std::map<std::string, std::vector<PlacedObject>> solutions;
  std::map<std::string, std::vector<PlacedObject>> supported;
  for (std::size_t i = 0; i < plan.regions.size(); ++i) {
    const RegionPlan& region = plan.regions[i];
    const RegionWalls walls{i == 0, i + 1 == plan.regions.size()};
    SearchOutcome r = plan_region(region, walls, ctx);
    trace.append(r.trace);
    if (!r.solved) continue;
    for (const auto& p : r.placed) {
      auto set = region.supported.find(p.spec_id);
      if (set == region.supported.end()) continue;
      SupportedOutcome s = place_supported(*region.find(p.spec_id), set->second, ctx);
      trace.append(s.trace);
      if (!s.placed.empty()) supported[p.spec_id] = std::move(s.placed);
    }
    solutions[region.id] = std::move(r.placed);
  }
  Scene scene = attach_supported(compose(plan, solutions), supported);
  scene.mode = config.mode;
  scene.seed = config.seed;
  scene.trace = std::move(trace);
  return scene;
}

Scene generate_scene(const std::string& prompt, PlacementOracle& oracle, const AssetCatalog& catalog,
                     const EmojiVocabulary& vocabulary, const GenerateOptions& options) {
  options.search.validate();
  SearchTrace trace;
  const RoomPlan plan = build_room_plan(prompt, oracle, catalog, trace, options.build);
  return solve_plan(plan, oracle, vocabulary, options.search, std::move(trace));
}

}  // namespace scenegen
