#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scenegen/geometry.hpp"
#include "scenegen/trace.hpp"
#include "scenegen/types.hpp"

namespace scenegen {

enum class RegionStatus { Solved, Unsat, Io };
std::string_view to_string(RegionStatus status);
std::optional<RegionStatus> parse_region_status(std::string_view text);

struct RegionResult {
  std::string id;
  double x_offset = 0.0;
  RegionStatus status = RegionStatus::Solved;

  friend bool operator==(const RegionResult&, const RegionResult&) = default;
};

/// A generated room. Placements are room-absolute; each object of the plan
/// appears at most once.
struct Scene {
  RoomPlan plan;
  SearchMode mode = SearchMode::Tree;
  std::uint64_t seed = 0;
  std::vector<RegionResult> regions;
  std::vector<PlacedObject> placements;
  SearchTrace trace;

  const PlacedObject* find(std::string_view id) const;
  /// Footprint of a placed object, from its spec dims and yaw.
  Rect footprint(const PlacedObject& p) const;
};

/// Region x-offsets: the running sum of the preceding region lengths.
std::vector<double> region_offsets(const RoomPlan& plan);

/// Translates each solved region's placements (region-local) by its offset.
/// Regions absent from `solutions` are recorded as Unsat. Throws
/// CompositionError on cross-region overlap or an object outside the room.
Scene compose(const RoomPlan& plan, const std::map<std::string, std::vector<PlacedObject>>& solutions);

/// Supporter-local pose (origin at the top-face center, supporter at yaw 0)
/// to room-absolute pose on a supporter placed at `supporter`.
PlacedObject to_room_frame(const PlacedObject& local, const PlacedObject& supporter, double supporter_height);

/// Adds supported objects (supporter-local poses keyed by supporter id).
/// Throws CompositionError when a supporter is missing or an object is not
/// inside its supporter's top face.
Scene attach_supported(Scene scene, const std::map<std::string, std::vector<PlacedObject>>& supported);

}  // namespace scenegen
