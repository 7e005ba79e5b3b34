#include "scenegen/heuristic_oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <tuple>

#include "fmt/format.h"

#include "scenegen/error.hpp"
#include "scenegen/hierarchy.hpp"
#include "scenegen/json_io.hpp"

namespace scenegen {
namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

double round_to(double v, double q) { return std::round(v / q) * q; }

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_draw(rng); }

std::string cells_text(const std::vector<int>& cells, const EmojiMap& emap) {
  std::vector<std::string> names;
  for (int c : cells) {
    const std::string* n = emap.name_of(c);
    if (!n) return "none";
    names.push_back(*n);
  }
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out;
}

// Cells of `run` along `axis` on line `fixed`.
std::vector<int> line_cells(const OccupancyGrid& grid, Axis axis, Run run, int fixed) {
  std::vector<int> out;
  for (int i = run.start; i < run.end(); ++i) {
    out.push_back(axis == Axis::Columns ? grid.index(fixed, i) : grid.index(i, fixed));
  }
  return out;
}

}  // namespace

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

OracleTemplates OracleTemplates::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open oracle templates " + path.string());
  return from_json(nlohmann::json::parse(in));
}

OracleTemplates OracleTemplates::from_json(const nlohmann::json& doc) {
  OracleTemplates t;
  for (const auto& r : doc.at("rooms")) {
    RoomType room;
    room.name = r.at("type").get<std::string>();
    room.keywords = r.at("keywords").get<std::vector<std::string>>();
    for (const auto& [size, variants] : r.at("regions").items()) {
      for (const auto& variant : variants) {
        std::vector<std::pair<std::string, double>> v;
        for (const auto& reg : variant) v.emplace_back(reg.at(0).get<std::string>(), reg.at(1).get<double>());
        room.regions[size].push_back(std::move(v));
      }
    }
    for (const auto& [function, variants] : r.at("objects").items()) {
      for (const auto& variant : variants) room.objects[function].push_back(variant);
    }
    t.rooms.push_back(std::move(room));
  }
  t.default_room = doc.at("default_room").get<std::string>();
  for (const auto& [size, range] : doc.at("areas").items()) {
    t.areas[size] = {range.at(0).get<double>(), range.at(1).get<double>()};
  }
  if (doc.contains("aspect")) t.aspect = {doc["aspect"].at(0).get<double>(), doc["aspect"].at(1).get<double>()};
  for (const auto& [category, variants] : doc.at("supported").items()) {
    for (const auto& variant : variants) t.supported[category].push_back(variant);
  }
  t.room(t.default_room);
  return t;
}

const OracleTemplates::RoomType& OracleTemplates::room(const std::string& name) const {
  const std::string key = lower(name);
  for (const auto& r : rooms) {
    if (r.name == key) return r;
  }
  for (const auto& r : rooms) {
    if (r.name == default_room) return r;
  }
  throw Error("oracle templates have no room type '" + name + "'");
}

const OracleTemplates::RoomType& OracleTemplates::match(const std::string& prompt) const {
  const std::string text = lower(prompt);
  for (const auto& r : rooms) {
    for (const auto& k : r.keywords) {
      if (text.find(k) != std::string::npos) return r;
    }
  }
  return room(default_room);
}

HeuristicOracle::HeuristicOracle(OracleTemplates templates, HeuristicConfig config)
    : templates_(std::move(templates)), config_(config) {
  if (!(config_.p_adv >= 0.0 && config_.p_adv <= 1.0)) throw ConfigError("p_adv must lie in [0, 1]");
}

OracleReply HeuristicOracle::query(const OracleQuery& query) {
  std::mt19937_64 rng(config_.seed ^ fnv1a64(structural_key(query)));
  const QueryKind kind = kind_of(query);
  // The adversarial draw is always the first draw of the stream.
  const bool adversarial = is_spatial(kind) && unit_draw(rng) < config_.p_adv;
  std::string text = std::visit(
      [&](const auto& q) -> std::string {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, RoomQuery>) return room_reply(q, rng);
        if constexpr (std::is_same_v<Q, RegionQuery>) return region_reply(q, rng);
        if constexpr (std::is_same_v<Q, ObjectsQuery>) return objects_reply(q, rng);
        if constexpr (std::is_same_v<Q, SupportedQuery>) return supported_reply(q, rng);
        if constexpr (std::is_same_v<Q, AnchorQuery>) return anchor_reply(q, adversarial);
        if constexpr (std::is_same_v<Q, SideQuery>) return side_reply(q, adversarial);
        if constexpr (std::is_same_v<Q, CellsQuery>) return cells_reply(q, adversarial);
        if constexpr (std::is_same_v<Q, SideEvalQuery>) return side_eval_reply(q);
        if constexpr (std::is_same_v<Q, FullLayoutQuery>) return full_layout_reply(q, rng);
      },
      query);
  return {kind, std::move(text)};
}

std::string HeuristicOracle::room_reply(const RoomQuery& q, std::mt19937_64& rng) const {
  const auto& room = templates_.match(q.prompt);
  const std::string size(to_string(size_hint(q.prompt)));
  auto it = templates_.areas.find(size);
  const auto range = it != templates_.areas.end() ? it->second : std::pair<double, double>{12.0, 20.0};
  const double area = uniform(rng, range.first, range.second);
  const double aspect = uniform(rng, templates_.aspect.first, templates_.aspect.second);
  const double length = std::max(1.0, round_to(std::sqrt(area * aspect), 0.25));
  const double width = std::max(1.0, round_to(area / length, 0.25));
  nlohmann::json j = {{"room_type", room.name}, {"length", length}, {"width", width}};
  return j.dump();
}

std::string HeuristicOracle::region_reply(const RegionQuery& q, std::mt19937_64& rng) const {
  const auto& room = templates_.room(q.room_type);
  const std::string size(to_string(size_hint(q.prompt)));
  auto it = room.regions.find(size);
  if (it == room.regions.end() || it->second.empty()) it = room.regions.begin();
  const auto& variant = it->second[pick(rng, it->second.size())];
  nlohmann::json regions = nlohmann::json::array();
  for (const auto& [function, fraction] : variant) regions.push_back({{"function", function}, {"fraction", fraction}});
  return nlohmann::json{{"regions", regions}}.dump();
}

std::string HeuristicOracle::objects_reply(const ObjectsQuery& q, std::mt19937_64& rng) const {
  const auto& room = templates_.room(q.room_type);
  auto it = room.objects.find(q.function);
  if (it == room.objects.end() || it->second.empty()) return R"({"objects": []})";
  const nlohmann::json& variant = it->second[pick(rng, it->second.size())];
  return variant.dump();
}

std::string HeuristicOracle::supported_reply(const SupportedQuery& q, std::mt19937_64& rng) const {
  auto it = templates_.supported.find(q.floor_object.category);
  if (it == templates_.supported.end() || it->second.empty()) return R"({"objects": []})";
  return it->second[pick(rng, it->second.size())].dump();
}

std::string HeuristicOracle::anchor_reply(const AnchorQuery& q, bool adversarial) const {
  const auto options = anchor_options(q.frame, q.rule, q.object.dims);
  std::vector<std::size_t> open;
  for (std::size_t i : rank_anchor_options(options)) {
    if (std::find(q.excluded.begin(), q.excluded.end(), options[i].name) == q.excluded.end()) open.push_back(i);
  }
  if (open.empty()) return "none";
  if (adversarial) {
    for (auto it = open.rbegin(); it != open.rend(); ++it) {
      if (options[*it].fits) return options[*it].name;
    }
  }
  return options[open.front()].name;
}

std::vector<std::pair<Side, int>> rank_sides(const PlacementProblem& problem, const std::vector<Side>& excluded) {
  const OccupancyGrid grid = problem_grid(problem);
  std::vector<std::pair<Side, int>> scored;
  for (Side s : side_tie_order(problem.anchor.yaw)) {
    if (std::find(excluded.begin(), excluded.end(), s) != excluded.end()) continue;
    scored.emplace_back(s, side_score(problem, grid, s));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return scored;
}

std::string HeuristicOracle::side_reply(const SideQuery& q, bool adversarial) const {
  const auto ranked = rank_sides(q.problem, q.excluded);
  if (ranked.empty()) return "none";
  if (adversarial) {
    for (auto it = ranked.rbegin(); it != ranked.rend(); ++it) {
      if (it->second > 0) return std::string(to_string(it->first));
    }
  }
  return std::string(to_string(ranked.front().first));
}

std::string HeuristicOracle::side_eval_reply(const SideEvalQuery& q) const {
  const OccupancyGrid grid = problem_grid(q.problem);
  const int score = side_score(q.problem, grid, q.side);
  if (score > 0) {
    return fmt::format("yes, {} free cells on the {} side can hold the {}.", score, to_string(q.side),
                       q.problem.object.category);
  }
  return fmt::format("no, the {} side has no spot where the {} fits.", to_string(q.side),
                     q.problem.object.category);
}

std::vector<CandidatePlacement> rank_runs(const PlacementProblem& problem, Side side,
                                          const std::optional<Run>& primary, const std::vector<Run>& excluded) {
  const OccupancyGrid grid = problem_grid(problem);
  const double cs = problem.frame.cell_size;
  const Axis pa = primary_axis(side);
  const Axis sa = secondary_axis(side);
  std::vector<CandidatePlacement> legal;
  for (const auto& p : legal_placements(problem, grid, side)) {
    if (primary && !(p.primary == *primary)) continue;
    const Run key = primary ? p.secondary : p.primary;
    if (std::find(excluded.begin(), excluded.end(), key) != excluded.end()) continue;
    legal.push_back(p);
  }
  // Best completion first: nearest primary run, then nearest secondary run.
  auto rank_key = [&](const CandidatePlacement& p) {
    return std::make_tuple(primary ? 0LL : std::llround(run_distance(p.primary, pa, problem.anchor, cs) * 1e6),
                           primary ? 0 : p.primary.start,
                           std::llround(run_distance(p.secondary, sa, problem.anchor, cs) * 1e6), p.secondary.start);
  };
  std::stable_sort(legal.begin(), legal.end(),
                   [&](const auto& a, const auto& b) { return rank_key(a) < rank_key(b); });
  // One entry per distinct run being chosen.
  std::vector<CandidatePlacement> out;
  for (const auto& p : legal) {
    const Run key = primary ? p.secondary : p.primary;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const CandidatePlacement& o) {
      return (primary ? o.secondary : o.primary) == key;
    });
    if (!seen) out.push_back(p);
  }
  return out;
}

std::string HeuristicOracle::cells_reply(const CellsQuery& q, bool adversarial) const {
  const auto ranked = rank_runs(q.problem, q.side, q.primary, q.excluded);
  if (ranked.empty()) return "none";
  const CandidatePlacement& pick = adversarial ? ranked.back() : ranked.front();
  const OccupancyGrid grid = problem_grid(q.problem);
  // Primary step names the run on the line where the completion starts;
  // secondary step names the run on the primary run's first line.
  const std::vector<int> cells = q.primary ? line_cells(grid, q.axis, pick.secondary, pick.primary.start)
                                           : line_cells(grid, q.axis, pick.primary, pick.secondary.start);
  return cells_text(cells, q.emoji_map);
}

std::string HeuristicOracle::full_layout_reply(const FullLayoutQuery& q, std::mt19937_64& rng) const {
  nlohmann::json placements = nlohmann::json::array();
  double x0 = 0.0;
  for (const auto& region : q.plan.regions) {
    for (const auto& obj : region.objects) {
      const double x = round_to(uniform(rng, x0, x0 + region.length), 0.05);
      const double y = round_to(uniform(rng, 0.0, region.width), 0.05);
      const int yaw = 90 * static_cast<int>(rng() % 4);
      placements.push_back({{"id", obj.id}, {"x", x}, {"y", y}, {"yaw", yaw}});
      auto sup = region.supported.find(obj.id);
      if (sup == region.supported.end()) continue;
      for (const auto& s : sup->second.objects) {
        placements.push_back({{"id", s.id}, {"x", x}, {"y", y}, {"yaw", yaw}});
      }
    }
    x0 += region.length;
  }
  return nlohmann::json{{"placements", placements}}.dump();
}

}  // namespace scenegen
