#include "scenegen/validate.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

namespace scenegen {
namespace {

constexpr double kPlanTolerance = 1e-6;

void check_spec(const ObjectSpec& spec, const std::string& field, std::vector<Violation>& out) {
  if (spec.category.empty()) out.push_back({field, fmt::format("object '{}' has an empty category", spec.id)});
  if (!spec.dims.valid()) out.push_back({field, fmt::format("object '{}' has invalid dimensions", spec.id)});
}

void check_edges(const std::vector<ObjectSpec>& objects, const std::string& anchor_id,
                 const std::vector<Edge>& edges, const std::string& field, std::vector<Violation>& out) {
  std::set<std::string> members;
  for (const auto& spec : objects) members.insert(spec.id);
  std::set<std::string> seen;
  for (const auto& edge : edges) {
    if (edge.object_id == anchor_id) {
      out.push_back({field, fmt::format("edge on anchor '{}'", edge.object_id)});
    } else if (!members.contains(edge.object_id)) {
      out.push_back({field, fmt::format("edge for unknown object '{}'", edge.object_id)});
    } else if (!seen.insert(edge.object_id).second) {
      out.push_back({field, fmt::format("duplicate edge for '{}'", edge.object_id)});
    }
  }
  for (const auto& spec : objects) {
    if (spec.id != anchor_id && !seen.contains(spec.id)) {
      out.push_back({field, fmt::format("missing edge for '{}'", spec.id)});
    }
  }
}

}  // namespace

std::vector<Violation> validate_room_plan(const RoomPlan& plan) {
  std::vector<Violation> out;
  if (!(plan.length > 0.0) || !(plan.width > 0.0)) {
    out.push_back({"dims", fmt::format("room dims {:g} x {:g} must be positive", plan.length, plan.width)});
  }
  if (plan.regions.empty()) out.push_back({"regions", "room has no regions"});

  double total = 0.0;
  std::set<std::string> ids;
  std::set<std::string> region_ids;
  for (std::size_t r = 0; r < plan.regions.size(); ++r) {
    const RegionPlan& region = plan.regions[r];
    const std::string base = fmt::format("regions[{}]", r);
    total += region.length;
    if (!region_ids.insert(region.id).second) out.push_back({base + ".id", "duplicate region id '" + region.id + "'"});
    if (!(region.length > 0.0)) out.push_back({base + ".length", "region length must be positive"});
    if (std::abs(region.width - plan.width) > kPlanTolerance) {
      out.push_back({base + ".width",
                     fmt::format("region width {:g} ≠ room width {:g}", region.width, plan.width)});
    }
    if (region.objects.empty()) {
      out.push_back({base + ".objects", "region has no objects"});
      continue;
    }
    for (const auto& spec : region.objects) {
      if (!ids.insert(spec.id).second) out.push_back({base + ".objects", "duplicate object id '" + spec.id + "'"});
      check_spec(spec, base + ".objects", out);
    }
    if (region.find(region.anchor_id) == nullptr) {
      out.push_back({base + ".anchor_id", "anchor '" + region.anchor_id + "' is not a region object"});
    }
    check_edges(region.objects, region.anchor_id, region.edges, base + ".edges", out);

    for (const auto& [supporter_id, set] : region.supported) {
      const std::string sfield = fmt::format("{}.supported[{}]", base, supporter_id);
      const ObjectSpec* supporter = region.find(supporter_id);
      if (supporter == nullptr) {
        out.push_back({sfield, "supporter '" + supporter_id + "' is not a region object"});
        continue;
      }
      if (!supporter->supportable) out.push_back({sfield, "supporter '" + supporter_id + "' is not supportable"});
      if (set.objects.empty()) continue;
      for (const auto& spec : set.objects) {
        if (!ids.insert(spec.id).second) out.push_back({sfield, "duplicate object id '" + spec.id + "'"});
        check_spec(spec, sfield, out);
        if (!(spec.dims.length < supporter->dims.length && spec.dims.depth < supporter->dims.depth)) {
          out.push_back({sfield, "object '" + spec.id + "' is not smaller than the supporter top face"});
        }
      }
      bool anchor_found = false;
      for (const auto& spec : set.objects) anchor_found |= spec.id == set.anchor_id;
      if (!anchor_found) out.push_back({sfield, "local anchor '" + set.anchor_id + "' is not a supported object"});
      check_edges(set.objects, set.anchor_id, set.edges, sfield + ".edges", out);
    }
  }
  if (!plan.regions.empty() && std::abs(total - plan.length) > kPlanTolerance) {
    out.push_back({"regions", fmt::format("region lengths sum {:g} ≠ room length {:g}", total, plan.length)});
  }
  return out;
}

}  // namespace scenegen
