#include "scenegen/scene_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fmt/format.h"

#include "scenegen/error.hpp"
#include "scenegen/json_io.hpp"

namespace scenegen {
namespace {

void dump_into(const nlohmann::json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map: sorted
        if (!first) out += ", ";
        first = false;
        out += nlohmann::json(key).dump();
        out += ": ";
        dump_into(value, out);
      }
      out += '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        dump_into(j[i], out);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) throw Error("cannot serialize a non-finite number");
      std::string s = fmt::format("{:.4f}", v);
      if (s == "-0.0000") s = "0.0000";
      out += s;
      break;
    }
    default:
      out += j.dump();
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string canonical_dump(const nlohmann::json& doc) {
  std::string out;
  dump_into(doc, out);
  return out;
}

nlohmann::json scene_to_json(const Scene& scene) {
  nlohmann::json regions = nlohmann::json::array();
  for (std::size_t i = 0; i < scene.plan.regions.size(); ++i) {
    nlohmann::json r = scene.plan.regions[i];
    if (i < scene.regions.size()) {
      r["x_offset"] = scene.regions[i].x_offset;
      r["status"] = std::string(to_string(scene.regions[i].status));
    }
    regions.push_back(std::move(r));
  }
  nlohmann::json placements = nlohmann::json::array();
  for (const auto& p : scene.placements) {
    const ObjectSpec* spec = scene.plan.find(p.spec_id);
    placements.push_back({{"id", p.spec_id},
                          {"category", spec ? spec->category : std::string()},
                          {"x", p.pos.x},
                          {"y", p.pos.y},
                          {"z", p.pos.z},
                          {"yaw", degrees(p.yaw)},
                          {"parent",
                           {{"kind", p.parent.kind == Parent::Kind::Floor ? "floor" : "supporter"},
                            {"id", p.parent.id}}}});
  }
  nlohmann::json trace = {{"events", scene.trace.events().size()},
                          {"oracle_calls", scene.trace.oracle_calls()}};
  for (EventKind k : {EventKind::Proposed, EventKind::Accepted, EventKind::Rejected, EventKind::Backtrack}) {
    trace[std::string(to_string(k))] = scene.trace.count(k);
  }
  return {{"format", std::string(kSceneFormat)},
          {"mode", std::string(to_string(scene.mode))},
          {"seed", scene.seed},
          {"room",
           {{"type", scene.plan.room_type},
            {"length", scene.plan.length},
            {"width", scene.plan.width},
            {"prompt", scene.plan.prompt}}},
          {"regions", regions},
          {"placements", placements},
          {"trace", trace}};
}

Scene scene_from_json(const nlohmann::json& doc) {
  if (doc.value("format", "") != kSceneFormat) throw Error("not a scene file");
  Scene s;
  const auto& room = doc.at("room");
  s.plan.room_type = room.at("type").get<std::string>();
  s.plan.length = room.at("length").get<double>();
  s.plan.width = room.at("width").get<double>();
  s.plan.prompt = room.value("prompt", "");
  const auto mode = parse_mode(doc.at("mode").get<std::string>());
  if (!mode) throw Error("scene file has an unknown mode");
  s.mode = *mode;
  s.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& r : doc.at("regions")) {
    s.plan.regions.push_back(r.get<RegionPlan>());
    RegionResult rr;
    rr.id = s.plan.regions.back().id;
    rr.x_offset = r.value("x_offset", 0.0);
    const auto status = parse_region_status(r.value("status", "solved"));
    if (!status) throw Error("scene file has an unknown region status");
    rr.status = *status;
    s.regions.push_back(rr);
  }
  for (const auto& p : doc.at("placements")) {
    PlacedObject po;
    po.spec_id = p.at("id").get<std::string>();
    po.pos = {p.at("x").get<double>(), p.at("y").get<double>(), p.at("z").get<double>()};
    po.yaw = yaw_from_degrees(p.at("yaw").get<int>());
    const auto& parent = p.at("parent");
    po.parent = {parent.at("kind").get<std::string>() == "floor" ? Parent::Kind::Floor : Parent::Kind::Supporter,
                 parent.at("id").get<std::string>()};
    s.placements.push_back(po);
  }
  return s;
}

std::string serialize_scene(const Scene& scene) { return canonical_dump(scene_to_json(scene)) + "\n"; }

void save_scene(const Scene& scene, const std::filesystem::path& path) { write_file(path, serialize_scene(scene)); }

Scene load_scene(const std::filesystem::path& path) {
  const auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw Error("scene file is not JSON: " + path.string());
  return scene_from_json(doc);
}

std::string serialize_trace(const SearchTrace& trace) {
  std::string out;
  for (const auto& e : trace.events()) {
    out += canonical_dump(nlohmann::json(e));
    out += '\n';
  }
  return out;
}

std::vector<TraceEvent> parse_trace(std::string_view text) {
  std::vector<TraceEvent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error("trace line is not JSON");
    out.push_back(j.get<TraceEvent>());
  }
  return out;
}

void save_trace(const SearchTrace& trace, const std::filesystem::path& path) {
  write_file(path, serialize_trace(trace));
}

std::vector<TraceEvent> load_trace(const std::filesystem::path& path) { return parse_trace(read_file(path)); }

}  // namespace scenegen
