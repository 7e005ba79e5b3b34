#pragma once

#include "json.hpp"

#include "scenegen/grid.hpp"
#include "scenegen/placement.hpp"
#include "scenegen/trace.hpp"
#include "scenegen/types.hpp"

// nlohmann::json conversions for the plan and pose types. Enums serialize
// by name, yaw by degrees.

namespace scenegen {

void to_json(nlohmann::json& j, const Vec2& v);
void from_json(const nlohmann::json& j, Vec2& v);
void to_json(nlohmann::json& j, const Dim3& d);  // [length, depth, height]
void from_json(const nlohmann::json& j, Dim3& d);
void to_json(nlohmann::json& j, const ObjectSpec& s);
void from_json(const nlohmann::json& j, ObjectSpec& s);
void to_json(nlohmann::json& j, const Edge& e);
void from_json(const nlohmann::json& j, Edge& e);
void to_json(nlohmann::json& j, const SupportedSet& s);
void from_json(const nlohmann::json& j, SupportedSet& s);
void to_json(nlohmann::json& j, const RegionPlan& r);
void from_json(const nlohmann::json& j, RegionPlan& r);
void to_json(nlohmann::json& j, const RoomPlan& r);
void from_json(const nlohmann::json& j, RoomPlan& r);
void to_json(nlohmann::json& j, const Rect& r);
void to_json(nlohmann::json& j, const Footprint& f);
void to_json(nlohmann::json& j, const RegionFrame& f);
void to_json(nlohmann::json& j, const AnchorPlacement& a);
void to_json(nlohmann::json& j, const PlacementProblem& p);
void to_json(nlohmann::json& j, const TraceEvent& e);
void from_json(const nlohmann::json& j, TraceEvent& e);

}  // namespace scenegen
