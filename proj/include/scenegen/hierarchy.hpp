#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "scenegen/catalog.hpp"
#include "scenegen/oracle.hpp"
#include "scenegen/trace.hpp"
#include "scenegen/types.hpp"

namespace scenegen {

enum class RoomSize { Small, Medium, Large };
std::string_view to_string(RoomSize size);

/// Size word in the prompt: explicit small/medium/large first, then common
/// synonyms (cozy, compact, oversized, ...). Medium when nothing matches.
RoomSize size_hint(std::string_view prompt);

struct AreaBand {
  double lo = 0.0;  // m^2, inclusive
  double hi = 0.0;
};
/// small 6-12, medium 12-20, large 20-35 square meters.
AreaBand area_band(RoomSize size);

struct BuildConfig {
  int attempts = 3;               // oracle attempts per hierarchy query
  double area_guard = 0.7;        // max total footprint / region area
  int max_regions = 3;
  double min_region_length = 1.0;
  int max_floor_objects = 8;
  int max_supported = 3;
  double length_quantum = 0.05;   // room and region lengths are multiples of this
};

/// First balanced {...} block of a reply (tolerates code fences and
/// surrounding prose). Throws ParseError(Malformed) when there is none.
nlohmann::json extract_json_object(std::string_view text);

/// Allocates room-unique object ids of the form <category>_<n>.
class IdAllocator {
 public:
  std::string next(const std::string& category);

 private:
  std::map<std::string, int> counts_;
};

struct RoomLevel {
  std::string room_type;
  double length = 0.0;
  double width = 0.0;
};

struct RegionLevelEntry {
  std::string function;
  double length = 0.0;
};

struct FloorLevel {
  std::vector<ObjectSpec> objects;
  std::string anchor_id;
  AnchorRule anchor_rule = AnchorRule::AlongWall;
  std::vector<Edge> edges;
};

/// Room type and dims. Dims are rescaled into the prompt's size band.
RoomLevel build_room_level(const std::string& prompt, PlacementOracle& oracle, const BuildConfig& config = {});

/// Region functions and lengths. Lengths tile the room length exactly and
/// are each at least min_region_length (smallest regions are dropped).
std::vector<RegionLevelEntry> build_region_level(const std::string& prompt, const RoomLevel& room,
                                                 PlacementOracle& oracle, const BuildConfig& config = {});

/// Floor objects of one region. Objects beyond the count cap or the area
/// guard are dropped and recorded as Rejected build events.
FloorLevel build_floor_object_level(const std::string& prompt, const std::string& room_type,
                                    const RegionPlan& region, PlacementOracle& oracle, const AssetCatalog& catalog,
                                    IdAllocator& ids, SearchTrace& trace, const BuildConfig& config = {});

/// Objects resting on `floor_object`. Throws NotSupportable.
SupportedSet build_supported_level(const std::string& prompt, const std::string& room_type,
                                   const ObjectSpec& floor_object, PlacementOracle& oracle,
                                   const AssetCatalog& catalog, IdAllocator& ids, SearchTrace& trace,
                                   const BuildConfig& config = {});

/// All four levels. The result passes validate_room_plan.
RoomPlan build_room_plan(const std::string& prompt, PlacementOracle& oracle, const AssetCatalog& catalog,
                         SearchTrace& trace, const BuildConfig& config = {});

}  // namespace scenegen
