#include "scenegen/scene.hpp"

#include "scenegen/error.hpp"

namespace scenegen {

std::string_view to_string(RegionStatus status) {
  switch (status) {
    case RegionStatus::Solved: return "solved";
    case RegionStatus::Unsat: return "unsat";
    case RegionStatus::Io: return "io";
  }
  return "solved";
}

std::optional<RegionStatus> parse_region_status(std::string_view text) {
  if (text == "solved") return RegionStatus::Solved;
  if (text == "unsat") return RegionStatus::Unsat;
  if (text == "io") return RegionStatus::Io;
  return std::nullopt;
}

const PlacedObject* Scene::find(std::string_view id) const {
  for (const auto& p : placements) {
    if (p.spec_id == id) return &p;
  }
  return nullptr;
}

Rect Scene::footprint(const PlacedObject& p) const {
  const ObjectSpec* spec = plan.find(p.spec_id);
  if (!spec) throw PreconditionError("placement '" + p.spec_id + "' has no spec in the plan");
  return effective_aabb(spec->dims, p.yaw, p.center());
}

std::vector<double> region_offsets(const RoomPlan& plan) {
  std::vector<double> out;
  double x = 0.0;
  for (const auto& r : plan.regions) {
    out.push_back(x);
    x += r.length;
  }
  return out;
}

Scene compose(const RoomPlan& plan, const std::map<std::string, std::vector<PlacedObject>>& solutions) {
  Scene scene;
  scene.plan = plan;
  const auto offsets = region_offsets(plan);
  const Rect room{0.0, 0.0, plan.length, plan.width};
  for (std::size_t i = 0; i < plan.regions.size(); ++i) {
    const RegionPlan& region = plan.regions[i];
    auto it = solutions.find(region.id);
    scene.regions.push_back({region.id, offsets[i], it == solutions.end() ? RegionStatus::Unsat : RegionStatus::Solved});
    if (it == solutions.end()) continue;
    for (PlacedObject p : it->second) {
      p.pos.x += offsets[i];
      p.pos.z = 0.0;
      p.parent = {Parent::Kind::Floor, region.id};
      const Rect box = scene.footprint(p);
      if (!contains(room, box)) throw CompositionError("object '" + p.spec_id + "' leaves the room");
      for (const auto& q : scene.placements) {
        if (overlaps(box, scene.footprint(q))) {
          throw CompositionError("objects '" + p.spec_id + "' and '" + q.spec_id + "' overlap");
        }
      }
      scene.placements.push_back(p);
    }
  }
  return scene;
}

PlacedObject to_room_frame(const PlacedObject& local, const PlacedObject& supporter, double supporter_height) {
  // Quarter-turn rotation: yaw 90 maps the local +y (front) to +x.
  double x = local.pos.x;
  double y = local.pos.y;
  for (int t = 0; t < static_cast<int>(supporter.yaw); ++t) {
    const double nx = y;
    const double ny = -x;
    x = nx;
    y = ny;
  }
  PlacedObject out = local;
  out.pos = {supporter.pos.x + x, supporter.pos.y + y, supporter_height};
  out.yaw = compose(supporter.yaw, local.yaw);
  out.parent = {Parent::Kind::Supporter, supporter.spec_id};
  return out;
}

Scene attach_supported(Scene scene, const std::map<std::string, std::vector<PlacedObject>>& supported) {
  for (const auto& [supporter_id, locals] : supported) {
    const PlacedObject* sup = scene.find(supporter_id);
    const ObjectSpec* spec = scene.plan.find(supporter_id);
    if (!sup || !spec) throw CompositionError("supporter '" + supporter_id + "' is not in the scene");
    const PlacedObject supporter = *sup;
    const Rect top = scene.footprint(supporter);
    for (const auto& local : locals) {
      const PlacedObject p = to_room_frame(local, supporter, spec->dims.height);
      if (!contains(top, scene.footprint(p), 1e-6)) {
        throw CompositionError("object '" + p.spec_id + "' overhangs supporter '" + supporter_id + "'");
      }
      scene.placements.push_back(p);
    }
  }
  return scene;
}

}  // namespace scenegen
