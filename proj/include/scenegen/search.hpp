#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenegen/emoji.hpp"
#include "scenegen/oracle.hpp"
#include "scenegen/placement.hpp"
#include "scenegen/trace.hpp"
#include "scenegen/types.hpp"

namespace scenegen {

/// One search problem: a floor region, or the top face of a supporter.
struct SearchArea {
  std::string scope;  // trace scope and prompt label
  RegionFrame frame;
  std::vector<ObjectSpec> objects;
  std::string anchor_id;
  AnchorRule anchor_rule = AnchorRule::AlongWall;
  std::vector<Edge> edges;
};

SearchArea region_area(const RegionPlan& region, RegionWalls walls, double cell_size);

/// Anchor first, then the rest by descending footprint area, ties by id.
std::vector<const ObjectSpec*> layer_order(const SearchArea& area);

struct SearchOutcome {
  bool solved = false;
  std::vector<PlacedObject> placed;  // area-local frame, layer order; empty unless solved
  SearchTrace trace;
};

/// Everything a search needs besides the area itself.
struct SearchContext {
  PlacementOracle& oracle;
  const EmojiVocabulary& vocabulary;
  SearchConfig config;  // budgets taken from config.effective()
};

/// Bounded DFS over object layers. Each layer is a node budget: after k
/// failed children the search backtracks to the nearest ancestor with budget
/// left; when none is left the area is Unsat.
SearchOutcome search_area(const SearchArea& area, const SearchContext& ctx);

/// search_area over a floor region (walls: which region sides are room walls).
SearchOutcome plan_region(const RegionPlan& region, RegionWalls walls, const SearchContext& ctx);

struct AnchorAttempt {
  std::optional<AnchorOption> pose;  // set when accepted
  std::string proposed;              // option name parsed from the reply, if any
  std::string reason;                // why it was rejected
};

/// One anchor proposal. `excluded` holds names proposed earlier.
AnchorAttempt propose_anchor(const SearchArea& area, const ObjectSpec& anchor,
                             const std::vector<std::string>& excluded, int attempt, const SearchContext& ctx,
                             SearchTrace& trace);

struct AnchorResult {
  std::optional<PlacedObject> placed;
  int attempts = 0;
};

/// Up to k_global_anchor distinct proposals for an anchor in an empty area.
AnchorResult place_anchor(const SearchArea& area, const SearchContext& ctx, SearchTrace& trace);

struct LocalThought {
  std::optional<Side> side;
  std::optional<Run> primary;
  std::optional<Run> secondary;
  std::optional<CandidatePlacement> pose;  // set when complete and legal
  std::vector<Side> sides_tried;
};

/// Three-step local search for one object: side, primary-axis run,
/// secondary-axis run. `round` is the global attempt this search serves;
/// `excluded` are sides tried by earlier global attempts.
LocalThought local_place(const PlacementProblem& problem, const std::string& scope, int layer, int visit, int round,
                         const std::vector<Side>& excluded, const SearchContext& ctx, SearchTrace& trace);

/// Supported objects on one supporter. The supporter's top face becomes a
/// miniature area (all sides walls, cell size / 5) searched with the local
/// anchor placed InCenter. When the area is Unsat the smallest object is
/// dropped and the search repeats. Placements are centered on the supporter
/// (origin at the top-face center, supporter yaw 0).
struct SupportedOutcome {
  std::vector<PlacedObject> placed;
  std::vector<std::string> dropped;
  SearchTrace trace;
};
SupportedOutcome place_supported(const ObjectSpec& supporter, const SupportedSet& set, const SearchContext& ctx);

/// Placements from a one-shot layout reply, room-absolute. Not repaired.
struct IoOutcome {
  std::vector<PlacedObject> placed;
  SearchTrace trace;
};
IoOutcome run_io_mode(const RoomPlan& plan, PlacementOracle& oracle);

}  // namespace scenegen
