#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenegen/geometry.hpp"
#include "scenegen/grid.hpp"
#include "scenegen/types.hpp"

namespace scenegen {

/// Extent and discretization of the area being furnished: a region, or the
/// top face of a supporting object.
struct RegionFrame {
  double length = 0.0;
  double width = 0.0;
  double cell_size = 0.25;
  RegionWalls walls;

  Rect bounds() const { return {0.0, 0.0, length, width}; }
  friend bool operator==(const RegionFrame&, const RegionFrame&) = default;
};

struct AnchorPlacement {
  std::string id;
  std::string category;
  Dim3 dims;
  Vec2 center;
  Yaw yaw = Yaw::Deg0;

  Rect box() const { return effective_aabb(dims, yaw, center); }
  AnchorGeometry geometry() const { return {box(), yaw}; }
  friend bool operator==(const AnchorPlacement&, const AnchorPlacement&) = default;
};

/// Everything needed to decide where one non-anchor object may go.
struct PlacementProblem {
  RegionFrame frame;
  std::vector<Footprint> placed;  // anchor included
  AnchorPlacement anchor;
  ObjectSpec object;
  Edge edge;
  RelationThresholds thresholds;
};

struct ThoughtVerdict {
  bool ok = false;
  std::string reason;  // "bounds", "overlap" or "relation" when !ok
};

/// Final check of a fully determined pose: inside the region, no
/// positive-area intersection with placed objects, relation satisfied.
ThoughtVerdict evaluate_thought(const PlacementProblem& problem, Vec2 center, Yaw yaw);

/// Top/Bottom sides choose rows first; Left/Right choose columns first.
Axis primary_axis(Side side);
Axis secondary_axis(Side side);

/// The side of the anchor box its front edge faces.
Side front_side(Yaw anchor_yaw);

/// Fixed side preference used to break ties: the anchor's front side, then
/// Right, Left, Bottom, Top.
std::vector<Side> side_tie_order(Yaw anchor_yaw);

/// Yaw assumed while choosing cells on `side`; the final yaw is recomputed
/// from the orientation rule at the chosen center.
Yaw provisional_yaw(const PlacementProblem& problem, Side side);

struct CellSpan {
  int cols = 1;
  int rows = 1;
};
CellSpan footprint_span(const Dim3& dims, Yaw yaw, double cell_size);

OccupancyGrid problem_grid(const PlacementProblem& problem);

struct CandidatePlacement {
  Side side = Side::Right;
  Run primary;
  Run secondary;
  Vec2 center;
  Yaw yaw = Yaw::Deg0;
  Rect box;
};

// Resolves the columns/rows of a (primary, secondary) run pair.
Run columns_of(Side side, Run primary, Run secondary);
Run rows_of(Side side, Run primary, Run secondary);
Vec2 run_center(Run cols, Run rows, double cell_size);

/// Pose for the given runs on `side`, with the rule-derived yaw.
CandidatePlacement resolve_placement(const PlacementProblem& problem, Side side, Run primary, Run secondary);

/// Every (primary, secondary) run pair on `side` whose cell rectangle lies in
/// candidate cells and whose resolved pose passes evaluate_thought. Ordered
/// by primary start, then secondary start.
std::vector<CandidatePlacement> legal_placements(const PlacementProblem& problem, const OccupancyGrid& grid,
                                                 Side side);

/// Number of candidate cells on `side` covered by at least one legal placement.
int side_score(const PlacementProblem& problem, const OccupancyGrid& grid, Side side);

/// Cells offered for the secondary step: cells inside the chosen primary run
/// whose full perpendicular segment across the run is candidate.
std::vector<int> secondary_cells(const OccupancyGrid& grid, const std::vector<int>& candidates, Side side,
                                 Run primary);

/// Distance between a run's center and the anchor center along the run's axis.
double run_distance(Run run, Axis axis, const AnchorPlacement& anchor, double cell_size);

// ---------------------------------------------------------------------------
// Anchor poses

struct AnchorOption {
  std::string name;  // "bottom", "top-left", "face-right", ...
  Vec2 center;
  Yaw yaw = Yaw::Deg0;
  Rect box;
  bool fits = false;       // box inside the region
  int wall_contacts = 0;   // room walls the box is flush against
  double front_area = 0.0;  // region area in front of the anchor
};

/// All candidate poses for `rule`, in fixed option order. AlongWall: one per
/// wall, facing away from it. AtCorner: one per corner, facing along the axis
/// with more free depth. InCenter: one per yaw.
std::vector<AnchorOption> anchor_options(const RegionFrame& frame, AnchorRule rule, const Dim3& dims);

/// Option indices best first: fitting options, more room-wall contacts,
/// larger front area, then option order.
std::vector<std::size_t> rank_anchor_options(const std::vector<AnchorOption>& options);

}  // namespace scenegen
