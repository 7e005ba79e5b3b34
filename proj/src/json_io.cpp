#include "scenegen/json_io.hpp"

#include "scenegen/error.hpp"

namespace scenegen {
namespace {

template <typename T, typename Parse>
T enum_from(const nlohmann::json& j, Parse parse, const char* what) {
  const auto text = j.get<std::string>();
  const auto v = parse(text);
  if (!v) throw Error(std::string("unknown ") + what + " '" + text + "'");
  return *v;
}

}  // namespace

void to_json(nlohmann::json& j, const Vec2& v) { j = nlohmann::json::array({v.x, v.y}); }
void from_json(const nlohmann::json& j, Vec2& v) { v = {j.at(0).get<double>(), j.at(1).get<double>()}; }

void to_json(nlohmann::json& j, const Dim3& d) { j = nlohmann::json::array({d.length, d.depth, d.height}); }
void from_json(const nlohmann::json& j, Dim3& d) {
  d = {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

void to_json(nlohmann::json& j, const ObjectSpec& s) {
  j = {{"id", s.id}, {"category", s.category}, {"dims", s.dims}, {"supportable", s.supportable}};
  if (!s.description.empty()) j["description"] = s.description;
}
void from_json(const nlohmann::json& j, ObjectSpec& s) {
  s.id = j.at("id").get<std::string>();
  s.category = j.at("category").get<std::string>();
  s.dims = j.at("dims").get<Dim3>();
  s.supportable = j.value("supportable", false);
  s.description = j.value("description", "");
}

void to_json(nlohmann::json& j, const Edge& e) {
  j = {{"object", e.object_id},
       {"relation", std::string(to_string(e.relation))},
       {"orientation", std::string(to_string(e.orientation_rule))}};
}
void from_json(const nlohmann::json& j, Edge& e) {
  e.object_id = j.at("object").get<std::string>();
  e.relation = enum_from<SpatialRelation>(j.at("relation"), parse_relation, "relation");
  e.orientation_rule = enum_from<OrientationRule>(j.at("orientation"), parse_orientation_rule, "orientation rule");
}

void to_json(nlohmann::json& j, const SupportedSet& s) {
  j = {{"objects", s.objects}, {"anchor", s.anchor_id}, {"edges", s.edges}};
}
void from_json(const nlohmann::json& j, SupportedSet& s) {
  s.objects = j.at("objects").get<std::vector<ObjectSpec>>();
  s.anchor_id = j.at("anchor").get<std::string>();
  s.edges = j.at("edges").get<std::vector<Edge>>();
}

void to_json(nlohmann::json& j, const RegionPlan& r) {
  j = {{"id", r.id},
       {"function", r.function},
       {"length", r.length},
       {"width", r.width},
       {"objects", r.objects},
       {"anchor", r.anchor_id},
       {"anchor_rule", std::string(to_string(r.anchor_rule))},
       {"edges", r.edges},
       {"supported", r.supported}};
}
void from_json(const nlohmann::json& j, RegionPlan& r) {
  r.id = j.at("id").get<std::string>();
  r.function = j.at("function").get<std::string>();
  r.length = j.at("length").get<double>();
  r.width = j.at("width").get<double>();
  r.objects = j.at("objects").get<std::vector<ObjectSpec>>();
  r.anchor_id = j.at("anchor").get<std::string>();
  r.anchor_rule = enum_from<AnchorRule>(j.at("anchor_rule"), parse_anchor_rule, "anchor rule");
  r.edges = j.at("edges").get<std::vector<Edge>>();
  r.supported = j.value("supported", std::map<std::string, SupportedSet>{});
}

void to_json(nlohmann::json& j, const RoomPlan& r) {
  j = {{"room_type", r.room_type},
       {"length", r.length},
       {"width", r.width},
       {"regions", r.regions},
       {"prompt", r.prompt}};
}
void from_json(const nlohmann::json& j, RoomPlan& r) {
  r.room_type = j.at("room_type").get<std::string>();
  r.length = j.at("length").get<double>();
  r.width = j.at("width").get<double>();
  r.regions = j.at("regions").get<std::vector<RegionPlan>>();
  r.prompt = j.value("prompt", "");
}

void to_json(nlohmann::json& j, const Rect& r) { j = nlohmann::json::array({r.min_x, r.min_y, r.max_x, r.max_y}); }

void to_json(nlohmann::json& j, const Footprint& f) {
  j = {{"id", f.id}, {"box", f.box}, {"anchor", f.anchor}};
}

void to_json(nlohmann::json& j, const RegionFrame& f) {
  j = {{"length", f.length},
       {"width", f.width},
       {"cell_size", f.cell_size},
       {"wall_left", f.walls.left},
       {"wall_right", f.walls.right}};
}

void to_json(nlohmann::json& j, const AnchorPlacement& a) {
  j = {{"id", a.id}, {"category", a.category}, {"dims", a.dims}, {"center", a.center}, {"yaw", degrees(a.yaw)}};
}

void to_json(nlohmann::json& j, const PlacementProblem& p) {
  j = {{"frame", p.frame},
       {"placed", p.placed},
       {"anchor", p.anchor},
       {"object", p.object},
       {"edge", p.edge},
       {"thresholds", {p.thresholds.front, p.thresholds.beside, p.thresholds.around}}};
}

void to_json(nlohmann::json& j, const TraceEvent& e) {
  j = {{"scope", e.scope},
       {"layer", e.layer},
       {"step", std::string(to_string(e.step))},
       {"visit", e.visit},
       {"attempt", e.attempt},
       {"kind", std::string(to_string(e.kind))},
       {"object", e.object_id},
       {"detail", e.detail}};
  if (e.pose) j["pose"] = {{"center", e.pose->center}, {"yaw", degrees(e.pose->yaw)}};
}
void from_json(const nlohmann::json& j, TraceEvent& e) {
  e.scope = j.at("scope").get<std::string>();
  e.layer = j.at("layer").get<int>();
  e.step = enum_from<SearchStep>(j.at("step"), parse_search_step, "search step");
  e.visit = j.at("visit").get<int>();
  e.attempt = j.at("attempt").get<int>();
  e.kind = enum_from<EventKind>(j.at("kind"), parse_event_kind, "event kind");
  e.object_id = j.at("object").get<std::string>();
  e.detail = j.at("detail").get<std::string>();
  if (j.contains("pose")) {
    e.pose = TracePose{j["pose"].at("center").get<Vec2>(), yaw_from_degrees(j["pose"].at("yaw").get<int>())};
  } else {
    e.pose.reset();
  }
}

}  // namespace scenegen
