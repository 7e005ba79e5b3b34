#include "scenegen/types.hpp"

#include <array>
#include <cctype>
#include <cmath>

#include "scenegen/error.hpp"

namespace scenegen {
namespace {

std::string normalize_token(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '-') {
      out.push_back('_');
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  while (!out.empty() && out.front() == '_') out.erase(out.begin());
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

constexpr std::array<std::string_view, 3> kRelationNames{"place_front", "place_beside", "place_around"};
constexpr std::array<std::string_view, 3> kAnchorRuleNames{"place_along_wall", "place_in_center",
                                                           "place_at_corner"};
constexpr std::array<std::string_view, 4> kOrientationNames{"face_anchor", "back_to_anchor", "same_as_anchor",
                                                            "opposite_anchor"};
constexpr std::array<std::string_view, 3> kModeNames{"io", "cot", "tree"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view text) {
  const std::string key = normalize_token(text);
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == key) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

bool Dim3::valid() const {
  return std::isfinite(length) && std::isfinite(depth) && std::isfinite(height) && length > 0.0 &&
         depth > 0.0 && height > 0.0;
}

int degrees(Yaw yaw) { return static_cast<int>(yaw) * 90; }

Yaw yaw_from_degrees(int deg) {
  if (deg % 90 != 0) throw Error("yaw must be a multiple of 90 degrees, got " + std::to_string(deg));
  const int q = ((deg / 90) % 4 + 4) % 4;
  return static_cast<Yaw>(q);
}

Yaw rotate(Yaw yaw, int quarter_turns) {
  const int q = ((static_cast<int>(yaw) + quarter_turns) % 4 + 4) % 4;
  return static_cast<Yaw>(q);
}

Yaw compose(Yaw a, Yaw b) { return rotate(a, static_cast<int>(b)); }

Vec2 facing(Yaw yaw) {
  switch (yaw) {
    case Yaw::Deg0: return {0.0, 1.0};
    case Yaw::Deg90: return {1.0, 0.0};
    case Yaw::Deg180: return {0.0, -1.0};
    case Yaw::Deg270: return {-1.0, 0.0};
  }
  return {0.0, 1.0};
}

bool swaps_extents(Yaw yaw) { return yaw == Yaw::Deg90 || yaw == Yaw::Deg270; }

std::string_view to_string(SpatialRelation relation) { return kRelationNames[static_cast<std::size_t>(relation)]; }
std::string_view to_string(AnchorRule rule) { return kAnchorRuleNames[static_cast<std::size_t>(rule)]; }
std::string_view to_string(OrientationRule rule) { return kOrientationNames[static_cast<std::size_t>(rule)]; }
std::string_view to_string(SearchMode mode) { return kModeNames[static_cast<std::size_t>(mode)]; }

std::optional<SpatialRelation> parse_relation(std::string_view text) {
  return lookup<SpatialRelation>(kRelationNames, text);
}
std::optional<AnchorRule> parse_anchor_rule(std::string_view text) {
  return lookup<AnchorRule>(kAnchorRuleNames, text);
}
std::optional<OrientationRule> parse_orientation_rule(std::string_view text) {
  return lookup<OrientationRule>(kOrientationNames, text);
}
std::optional<SearchMode> parse_mode(std::string_view text) { return lookup<SearchMode>(kModeNames, text); }

const ObjectSpec* RegionPlan::find(std::string_view object_id) const {
  for (const auto& spec : objects) {
    if (spec.id == object_id) return &spec;
  }
  return nullptr;
}

const Edge* RegionPlan::edge_for(std::string_view object_id) const {
  for (const auto& edge : edges) {
    if (edge.object_id == object_id) return &edge;
  }
  return nullptr;
}

const ObjectSpec* RoomPlan::find(std::string_view object_id) const {
  for (const auto& region : regions) {
    if (const auto* spec = region.find(object_id)) return spec;
    for (const auto& [_, set] : region.supported) {
      for (const auto& spec : set.objects) {
        if (spec.id == object_id) return &spec;
      }
    }
  }
  return nullptr;
}

std::size_t RoomPlan::object_count() const {
  std::size_t n = 0;
  for (const auto& region : regions) {
    n += region.objects.size();
    for (const auto& [_, set] : region.supported) n += set.objects.size();
  }
  return n;
}

SearchConfig SearchConfig::effective() const {
  SearchConfig out = *this;
  if (mode == SearchMode::CoT) {
    out.k_global_anchor = 1;
    out.k_global_other = 1;
    out.k_local_side = 1;
    out.k_local_axis = 1;
  }
  return out;
}

void SearchConfig::validate() const {
  if (k_global_anchor < 1 || k_global_other < 1 || k_local_side < 1 || k_local_axis < 1) {
    throw ConfigError("every attempt budget k must be >= 1");
  }
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw ConfigError("cell_size must be > 0");
  if (!(thresholds.front >= 0.0 && thresholds.beside >= 0.0 && thresholds.around >= 0.0)) {
    throw ConfigError("relation thresholds must be non-negative");
  }
}

}  // namespace scenegen
