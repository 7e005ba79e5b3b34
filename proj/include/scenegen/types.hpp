#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scenegen {

inline constexpr double kAreaEpsilon = 1e-9;    // m^2
inline constexpr double kLengthEpsilon = 1e-9;  // m

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Object extents in meters. `length` is the x-extent and `depth` the
/// y-extent when the object sits at yaw 0 (facing +y).
struct Dim3 {
  double length = 0.0;
  double depth = 0.0;
  double height = 0.0;

  bool valid() const;
  double footprint_area() const { return length * depth; }

  friend bool operator==(const Dim3&, const Dim3&) = default;
};

/// Quarter-turn orientation. 0 faces +y, 90 faces +x, 180 faces -y, 270 faces -x.
enum class Yaw : std::uint8_t { Deg0 = 0, Deg90 = 1, Deg180 = 2, Deg270 = 3 };

int degrees(Yaw yaw);
Yaw yaw_from_degrees(int degrees);  // throws Error unless a multiple of 90
Yaw rotate(Yaw yaw, int quarter_turns);
Yaw compose(Yaw a, Yaw b);
Vec2 facing(Yaw yaw);
bool swaps_extents(Yaw yaw);

enum class SpatialRelation { PlaceFront, PlaceBeside, PlaceAround };
enum class AnchorRule { AlongWall, InCenter, AtCorner };
enum class OrientationRule { FaceAnchor, BackToAnchor, SameAsAnchor, OppositeAnchor };

std::string_view to_string(SpatialRelation relation);
std::string_view to_string(AnchorRule rule);
std::string_view to_string(OrientationRule rule);
std::optional<SpatialRelation> parse_relation(std::string_view text);
std::optional<AnchorRule> parse_anchor_rule(std::string_view text);
std::optional<OrientationRule> parse_orientation_rule(std::string_view text);

struct ObjectSpec {
  std::string id;
  std::string category;
  Dim3 dims;
  bool supportable = false;
  std::string description;

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

/// Binds a non-anchor object to its region's anchor.
struct Edge {
  std::string object_id;
  SpatialRelation relation = SpatialRelation::PlaceAround;
  OrientationRule orientation_rule = OrientationRule::SameAsAnchor;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Parent {
  enum class Kind { Floor, Supporter };
  Kind kind = Kind::Floor;
  std::string id;  // region id for Floor, supporter object id for Supporter

  friend bool operator==(const Parent&, const Parent&) = default;
};

/// Resolved pose of an object. `pos` is the footprint center; the frame
/// (region-local, supporter-local or room-absolute) depends on context.
struct PlacedObject {
  std::string spec_id;
  Vec3 pos;
  Yaw yaw = Yaw::Deg0;
  Parent parent;

  Vec2 center() const { return {pos.x, pos.y}; }
  friend bool operator==(const PlacedObject&, const PlacedObject&) = default;
};

/// Objects resting on one supportable floor object. The local anchor is the
/// largest footprint.
struct SupportedSet {
  std::vector<ObjectSpec> objects;
  std::string anchor_id;
  std::vector<Edge> edges;

  friend bool operator==(const SupportedSet&, const SupportedSet&) = default;
};

struct RegionPlan {
  std::string id;
  std::string function;
  double length = 0.0;
  double width = 0.0;
  std::vector<ObjectSpec> objects;
  std::string anchor_id;
  AnchorRule anchor_rule = AnchorRule::AlongWall;
  std::vector<Edge> edges;
  std::map<std::string, SupportedSet> supported;  // floor object id -> set

  const ObjectSpec* find(std::string_view object_id) const;
  const Edge* edge_for(std::string_view object_id) const;

  friend bool operator==(const RegionPlan&, const RegionPlan&) = default;
};

struct RoomPlan {
  std::string room_type;
  double length = 0.0;
  double width = 0.0;
  std::vector<RegionPlan> regions;
  std::string prompt;

  // Finds a floor or supported object anywhere in the plan.
  const ObjectSpec* find(std::string_view object_id) const;
  std::size_t object_count() const;

  friend bool operator==(const RoomPlan&, const RoomPlan&) = default;
};

enum class SearchMode { IO, CoT, Tree };
std::string_view to_string(SearchMode mode);
std::optional<SearchMode> parse_mode(std::string_view text);

struct RelationThresholds {
  double front = 1.5;   // max gap for PlaceFront
  double beside = 0.5;  // max gap for PlaceBeside
  double around = 2.0;  // max center distance for PlaceAround

  friend bool operator==(const RelationThresholds&, const RelationThresholds&) = default;
};

struct SearchConfig {
  int k_global_anchor = 3;
  int k_global_other = 1;
  int k_local_side = 2;
  int k_local_axis = 1;
  SearchMode mode = SearchMode::Tree;
  double cell_size = 0.25;
  std::uint64_t seed = 0;
  RelationThresholds thresholds;

  // Budgets actually used by the search: CoT collapses every k to 1.
  SearchConfig effective() const;
  void validate() const;  // throws ConfigError
};

}  // namespace scenegen
