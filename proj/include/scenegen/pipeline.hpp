#pragma once

#include <filesystem>
#include <string>

#include "scenegen/catalog.hpp"
#include "scenegen/emoji.hpp"
#include "scenegen/hierarchy.hpp"
#include "scenegen/oracle.hpp"
#include "scenegen/scene.hpp"
#include "scenegen/search.hpp"

namespace scenegen {

/// Shipped data directory (catalog, emoji vocabulary, templates).
std::filesystem::path default_data_dir();

/// Catalog, emoji vocabulary, prompt templates and deterministic-oracle
/// templates loaded from one data directory.
struct Resources {
  AssetCatalog catalog;
  EmojiVocabulary vocabulary;
  std::filesystem::path templates_dir;
  std::filesystem::path oracle_templates;

  static Resources load(const std::filesystem::path& data_dir = default_data_dir());
};

struct GenerateOptions {
  SearchConfig search;
  BuildConfig build;
};

/// Prompt to Scene: hierarchy, then per-region search (Tree/CoT) or a
/// single layout query (IO), then composition. Unsat regions contribute no
/// objects. The returned trace holds build and search events in order.
Scene generate_scene(const std::string& prompt, PlacementOracle& oracle, const AssetCatalog& catalog,
                     const EmojiVocabulary& vocabulary, const GenerateOptions& options);

/// Region search and composition for an already built plan.
Scene solve_plan(const RoomPlan& plan, PlacementOracle& oracle, const EmojiVocabulary& vocabulary,
                 const SearchConfig& config, SearchTrace trace = {});

}  // namespace scenegen
