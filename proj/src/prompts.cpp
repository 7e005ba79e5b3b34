#include "scenegen/prompts.hpp"

#include <fstream>
#include <sstream>

#include "fmt/format.h"

#include "scenegen/error.hpp"
#include "scenegen/json_io.hpp"

namespace scenegen {
namespace {

// Four decimals, trailing zeros dropped.
std::string num(double v) {
  std::string s = fmt::format("{:.4f}", v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string dims_text(const Dim3& d) {
  return fmt::format("{} m long, {} m deep, {} m tall", num(d.length), num(d.depth), num(d.height));
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string or_none(std::string s) { return s.empty() ? "none" : s; }

std::string box_text(const Rect& r) {
  return fmt::format("x {}..{}, y {}..{}", num(r.min_x), num(r.max_x), num(r.min_y), num(r.max_y));
}

std::string placed_text(const PlacementProblem& p) {
  std::vector<std::string> lines;
  for (const auto& fp : p.placed) {
    lines.push_back(fmt::format("- {}{}: {}", fp.id, fp.anchor ? " (anchor)" : "", box_text(fp.box)));
  }
  return lines.empty() ? "- none" : join(lines, "\n");
}

std::string anchor_text(const AnchorPlacement& a) {
  return fmt::format("{} ({}) centered at ({}, {}), facing {} degrees", a.id, a.category, num(a.center.x),
                     num(a.center.y), degrees(a.yaw));
}

std::string frame_text(const RegionFrame& f) {
  return fmt::format("{} m by {} m, cell size {} m", num(f.length), num(f.width), num(f.cell_size));
}

std::string relation_words(SpatialRelation r) {
  switch (r) {
    case SpatialRelation::PlaceFront: return "in front of";
    case SpatialRelation::PlaceBeside: return "beside";
    case SpatialRelation::PlaceAround: return "around";
  }
  return "around";
}

std::string orientation_words(OrientationRule r) {
  switch (r) {
    case OrientationRule::FaceAnchor: return "facing the anchor";
    case OrientationRule::BackToAnchor: return "with its back to the anchor";
    case OrientationRule::SameAsAnchor: return "facing the same direction as the anchor";
    case OrientationRule::OppositeAnchor: return "facing opposite to the anchor";
  }
  return "";
}

std::string span_text(int n, Axis axis) {
  const bool cols = axis == Axis::Columns;
  return count_word(n) + " " + (cols ? (n == 1 ? "column" : "columns") : (n == 1 ? "row" : "rows"));
}

void add_problem(std::map<std::string, std::string>& v, const PlacementProblem& p) {
  v["object"] = p.object.id;
  v["category"] = p.object.category;
  v["dims"] = dims_text(p.object.dims);
  v["anchor"] = anchor_text(p.anchor);
  v["relation"] = relation_words(p.edge.relation);
  v["relation_name"] = std::string(to_string(p.edge.relation));
  v["orientation"] = orientation_words(p.edge.orientation_rule);
  v["placed"] = placed_text(p);
  v["frame"] = frame_text(p.frame);
}

struct VarBuilder {
  using Vars = std::map<std::string, std::string>;

  Vars operator()(const RoomQuery& q) const { return {{"prompt", q.prompt}, {"attempt", std::to_string(q.attempt)}}; }
  Vars operator()(const RegionQuery& q) const {
    return {{"prompt", q.prompt},
            {"room_type", q.room_type},
            {"length", num(q.length)},
            {"width", num(q.width)},
            {"attempt", std::to_string(q.attempt)}};
  }
  Vars operator()(const ObjectsQuery& q) const {
    return {{"prompt", q.prompt},       {"room_type", q.room_type},           {"region_id", q.region_id},
            {"function", q.function},   {"length", num(q.length)},             {"width", num(q.width)},
            {"categories", join(q.categories, ", ")}, {"attempt", std::to_string(q.attempt)}};
  }
  Vars operator()(const SupportedQuery& q) const {
    return {{"prompt", q.prompt},
            {"room_type", q.room_type},
            {"object", q.floor_object.id},
            {"category", q.floor_object.category},
            {"top_length", num(q.floor_object.dims.length)},
            {"top_depth", num(q.floor_object.dims.depth)},
            {"categories", join(q.categories, ", ")},
            {"attempt", std::to_string(q.attempt)}};
  }
  Vars operator()(const AnchorQuery& q) const {
    return {{"scope", q.scope},
            {"grid", q.grid_prompt},
            {"frame", frame_text(q.frame)},
            {"object", q.object.id},
            {"category", q.object.category},
            {"dims", dims_text(q.object.dims)},
            {"rule", std::string(to_string(q.rule))},
            {"options", join(q.options, ", ")},
            {"excluded", or_none(join(q.excluded, ", "))},
            {"attempt", std::to_string(q.attempt)}};
  }
  Vars operator()(const SideQuery& q) const {
    Vars v{{"scope", q.scope},
           {"grid", q.grid_prompt},
           {"round", std::to_string(q.round)},
           {"attempt", std::to_string(q.attempt)}};
    add_problem(v, q.problem);
    std::vector<std::string> ex;
    for (Side s : q.excluded) ex.emplace_back(to_string(s));
    v["excluded"] = or_none(join(ex, ", "));
    return v;
  }
  Vars operator()(const CellsQuery& q) const {
    Vars v{{"scope", q.scope},
           {"grid", q.grid_prompt},
           {"side", std::string(to_string(q.side))},
           {"axis", std::string(to_string(q.axis))},
           {"count", std::to_string(q.expected_count)},
           {"span", span_text(q.expected_count, q.axis)},
           {"round", std::to_string(q.round)},
           {"attempt", std::to_string(q.attempt)}};
    add_problem(v, q.problem);
    v["step"] = q.primary ? fmt::format("Its {} are already fixed to {}..{}; now choose its {}.",
                                        q.axis == Axis::Columns ? "rows" : "columns", q.primary->start,
                                        q.primary->end() - 1, to_string(q.axis))
                          : fmt::format("Choose its {} first.", to_string(q.axis));
    std::vector<std::string> ex;
    for (const Run& r : q.excluded) ex.push_back(fmt::format("{}..{}", r.start, r.end() - 1));
    v["excluded"] = or_none(join(ex, ", "));
    return v;
  }
  Vars operator()(const SideEvalQuery& q) const {
    Vars v{{"scope", q.scope},
           {"grid", q.grid_prompt},
           {"side", std::string(to_string(q.side))},
           {"round", std::to_string(q.round)},
           {"attempt", std::to_string(q.attempt)}};
    add_problem(v, q.problem);
    return v;
  }
  Vars operator()(const FullLayoutQuery& q) const {
    return {{"prompt", q.plan.prompt},
            {"room_type", q.plan.room_type},
            {"length", num(q.plan.length)},
            {"width", num(q.plan.width)},
            {"plan", nlohmann::json(q.plan).dump()}};
  }
};

}  // namespace

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) throw Error("unterminated template variable");
    out.append(tmpl.substr(pos, open - pos));
    const std::string name(tmpl.substr(open + 2, close - open - 2));
    auto it = vars.find(name);
    if (it == vars.end()) throw Error("unknown template variable '" + name + "'");
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

std::string count_word(int n) {
  static const char* const kWords[] = {"zero", "one", "two",   "three", "four",   "five",  "six",
                                       "seven", "eight", "nine", "ten", "eleven", "twelve"};
  if (n >= 0 && n <= 12) return kWords[n];
  return std::to_string(n);
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("template directory not found: " + dir.string());
  std::map<std::string, std::string> templates;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path());
    std::stringstream buf;
    buf << in.rdbuf();
    templates.emplace(entry.path().stem().string(), buf.str());
  }
  return PromptTemplates(std::move(templates));
}

const std::string& PromptTemplates::get(const std::string& name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw MissingTemplate(name);
  return it->second;
}

std::map<std::string, std::string> PromptTemplates::variables(const OracleQuery& query) {
  return std::visit(VarBuilder{}, query);
}

std::vector<ChatMessage> PromptTemplates::render(const OracleQuery& query) const {
  const std::string kind(to_string(kind_of(query)));
  const auto vars = variables(query);
  return {{"system", render_template(get("system"), vars)}, {"user", render_template(get(kind), vars)}};
}

std::string PromptTemplates::canonical_text(const OracleQuery& query) const {
  std::string out(to_string(kind_of(query)));
  out += '\n';
  for (const auto& m : render(query)) {
    out += "[" + m.role + "]\n" + m.content;
    if (out.back() != '\n') out += '\n';
  }
  return out;
}

std::string PromptTemplates::fingerprint(const OracleQuery& query) const {
  return fnv1a64_hex(canonical_text(query));
}

}  // namespace scenegen
