#include "scenegen/render.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "fmt/format.h"

namespace scenegen {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::set<std::string> anchor_ids(const RoomPlan& plan) {
  std::set<std::string> out;
  for (const auto& r : plan.regions) {
    out.insert(r.anchor_id);
    for (const auto& [sid, set] : r.supported) out.insert(set.anchor_id);
  }
  return out;
}

std::string draw(const Scene& scene, const std::vector<PlacedObject>& placements, const RenderOptions& o) {
  const double s = o.pixels_per_meter;
  const double W = scene.plan.length * s + 2 * o.margin;
  const double H = scene.plan.width * s + 2 * o.margin;
  auto px = [&](double x) { return o.margin + x * s; };
  auto py = [&](double y) { return o.margin + (scene.plan.width - y) * s; };  // +y points up

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1f}\" height=\"{:.1f}\" viewBox=\"0 0 {:.1f} {:.1f}\">\n",
      W, H, W, H);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"white\"/>\n", W, H);
  out += fmt::format(
      "<rect class=\"room\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"black\" stroke-width=\"4\"/>\n",
      px(0), py(scene.plan.width), scene.plan.length * s, scene.plan.width * s);
  const auto offsets = region_offsets(scene.plan);
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    out += fmt::format(
        "<line class=\"region\" x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"gray\" "
        "stroke-dasharray=\"8,6\" stroke-width=\"2\"/>\n",
        px(offsets[i]), py(0), px(offsets[i]), py(scene.plan.width));
  }
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" fill=\"gray\">{}</text>\n",
                       px(offsets[i]) + 4, py(scene.plan.width) - 6,
                       escape(scene.plan.regions[i].function));
  }
  const auto anchors = anchor_ids(scene.plan);
  // Floor objects first so supported objects draw on top.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& p : placements) {
      const bool supported = p.parent.kind == Parent::Kind::Supporter;
      if (supported != (pass == 1)) continue;
      const ObjectSpec* spec = scene.plan.find(p.spec_id);
      if (!spec) continue;
      const Rect b = scene.footprint(p);
      const bool anchor = anchors.contains(p.spec_id);
      const char* fill = anchor ? "#e53935" : (supported ? "#90caf9" : "#d7ccc8");
      out += fmt::format(
          "<rect class=\"object\" data-id=\"{}\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
          "fill=\"{}\" fill-opacity=\"0.85\" stroke=\"black\" stroke-width=\"1\"/>\n",
          escape(p.spec_id), px(b.min_x), py(b.max_y), b.width() * s, b.height() * s, fill);
      // Facing tick: from the center to the middle of the front edge.
      const Vec2 f = facing(p.yaw);
      const Vec2 c = b.center();
      const Vec2 edge{c.x + f.x * b.width() / 2.0, c.y + f.y * b.height() / 2.0};
      out += fmt::format(
          "<line class=\"facing\" x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\" "
          "stroke-width=\"2\"/>\n",
          px(c.x), py(c.y), px(edge.x), py(edge.y));
      out += fmt::format(
          "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"{}\" text-anchor=\"middle\">{}</text>\n", px(c.x),
          py(c.y) + (supported ? -3.0 : 12.0), supported ? 8 : 11, escape(spec->category));
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string render_svg(const Scene& scene, const RenderOptions& options) {
  return draw(scene, scene.placements, options);
}

std::vector<PlacedObject> replay_placements(const Scene& scene, const std::vector<TraceEvent>& events,
                                            std::size_t step) {
  if (step > events.size()) {
    throw std::out_of_range(fmt::format("step {} is beyond the {} trace events", step, events.size()));
  }
  std::map<std::string, double> offset;
  for (const auto& r : scene.regions) offset[r.id] = r.x_offset;
  const auto offsets = region_offsets(scene.plan);
  for (std::size_t i = 0; i < scene.plan.regions.size(); ++i) offset.emplace(scene.plan.regions[i].id, offsets[i]);

  std::vector<PlacedObject> state;
  auto erase = [&](const std::string& id) {
    std::erase_if(state, [&](const PlacedObject& p) { return p.spec_id == id; });
  };
  for (std::size_t i = 0; i < step; ++i) {
    const TraceEvent& e = events[i];
    const bool global = e.step == SearchStep::Anchor || e.step == SearchStep::Object || e.step == SearchStep::Layout;
    if (!global) continue;
    if (e.kind == EventKind::Backtrack || (e.kind == EventKind::Rejected && e.detail.rfind("discarded", 0) == 0)) {
      erase(e.object_id);
      continue;
    }
    if (e.kind != EventKind::Accepted || !e.pose) continue;
    PlacedObject p{e.object_id, {e.pose->center.x, e.pose->center.y, 0.0}, e.pose->yaw, {}};
    if (e.scope.rfind("region:", 0) == 0) {
      const std::string rid = e.scope.substr(7);
      p.pos.x += offset[rid];
      p.parent = {Parent::Kind::Floor, rid};
    } else if (e.scope.rfind("support:", 0) == 0) {
      std::string sid = e.scope.substr(8);
      sid = sid.substr(0, sid.find('/'));
      const ObjectSpec* sspec = scene.plan.find(sid);
      auto sup = std::find_if(state.begin(), state.end(), [&](const PlacedObject& q) { return q.spec_id == sid; });
      if (!sspec || sup == state.end()) continue;
      PlacedObject local = p;
      local.pos = {p.pos.x - sspec->dims.length / 2.0, p.pos.y - sspec->dims.depth / 2.0, 0.0};
      p = to_room_frame(local, *sup, sspec->dims.height);
    } else if (const PlacedObject* final_pose = scene.find(e.object_id)) {
      p.parent = final_pose->parent;
      p.pos.z = final_pose->pos.z;
    }
    erase(p.spec_id);
    state.push_back(p);
  }
  return state;
}

std::string render_step_svg(const Scene& scene, const std::vector<TraceEvent>& events, std::size_t step,
                            const RenderOptions& options) {
  return draw(scene, replay_placements(scene, events, step), options);
}

}  // namespace scenegen
