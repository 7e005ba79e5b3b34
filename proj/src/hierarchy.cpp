#include "scenegen/hierarchy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <optional>

#include "fmt/format.h"

#include "scenegen/error.hpp"
#include "scenegen/validate.hpp"

namespace scenegen {
namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

bool has_word(const std::string& text, std::string_view word) {
  std::size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::string::npos) {
    const bool left = pos == 0 || !std::isalpha(static_cast<unsigned char>(text[pos - 1]));
    const std::size_t end = pos + word.size();
    const bool right = end >= text.size() || !std::isalpha(static_cast<unsigned char>(text[end]));
    if (left && right) return true;
    pos = end;
  }
  return false;
}

double quantize(double v, double q) { return std::round(v / q) * q; }

bool positive(const nlohmann::json& j) {
  return j.is_number() && std::isfinite(j.get<double>()) && j.get<double>() > 0.0;
}

void reject_build(SearchTrace& trace, const std::string& object, std::string detail) {
  TraceEvent e;
  e.scope = "build";
  e.step = SearchStep::Build;
  e.kind = EventKind::Rejected;
  e.object_id = object;
  e.detail = std::move(detail);
  trace.record(std::move(e));
}

// One proposed object from an objects/supported reply.
struct Proposal {
  std::string category;
  Dim3 dims;
  std::optional<SpatialRelation> relation;
  std::optional<OrientationRule> orientation;
};

// Parses the "objects" array; std::nullopt with `unknown` set when a
// category is not in the catalog.
std::optional<std::vector<Proposal>> parse_proposals(const nlohmann::json& doc, const AssetCatalog& catalog,
                                                     std::string& unknown) {
  if (!doc.contains("objects") || !doc["objects"].is_array()) return std::nullopt;
  std::vector<Proposal> out;
  for (const auto& item : doc["objects"]) {
    Proposal p;
    if (item.is_string()) {
      p.category = lower(item.get<std::string>());
    } else if (item.is_object() && item.contains("category") && item["category"].is_string()) {
      p.category = lower(item["category"].get<std::string>());
      if (item.contains("relation") && item["relation"].is_string()) {
        p.relation = parse_relation(item["relation"].get<std::string>());
      }
      if (item.contains("orientation") && item["orientation"].is_string()) {
        p.orientation = parse_orientation_rule(item["orientation"].get<std::string>());
      }
      if (item.contains("dims") && item["dims"].is_array() && item["dims"].size() == 3) {
        const auto& d = item["dims"];
        if (d[0].is_number() && d[1].is_number() && d[2].is_number()) {
          p.dims = {d[0].get<double>(), d[1].get<double>(), d[2].get<double>()};
        }
      }
    } else {
      return std::nullopt;
    }
    std::replace(p.category.begin(), p.category.end(), ' ', '_');
    if (!catalog.contains(p.category)) {
      unknown = p.category;
      return std::nullopt;
    }
    out.push_back(std::move(p));
  }
  return out;
}

Dim3 resolved_dims(const Proposal& p, const AssetCatalog& catalog) {
  ObjectSpec spec;
  spec.category = p.category;
  spec.dims = p.dims;
  return resolve_assets({spec}, catalog).front().dims;
}

Edge make_edge(const std::string& id, const Proposal& p) {
  return {id, p.relation.value_or(SpatialRelation::PlaceAround),
          p.orientation.value_or(OrientationRule::SameAsAnchor)};
}

[[noreturn]] void exhausted(std::string_view level, const std::string& unknown, int attempts) {
  if (!unknown.empty()) throw UnknownCategory(unknown);
  throw OracleFailure(fmt::format("{} level: no usable reply after {} attempts", level, attempts));
}

// Counts hierarchy queries into the build trace.
class CountingOracle : public PlacementOracle {
 public:
  CountingOracle(PlacementOracle& inner, SearchTrace& trace) : inner_(inner), trace_(trace) {}
  OracleReply query(const OracleQuery& q) override {
    trace_.count_oracle_call();
    return inner_.query(q);
  }

 private:
  PlacementOracle& inner_;
  SearchTrace& trace_;
};

}  // namespace

std::string_view to_string(RoomSize size) {
  switch (size) {
    case RoomSize::Small: return "small";
    case RoomSize::Medium: return "medium";
    case RoomSize::Large: return "large";
  }
  return "medium";
}

RoomSize size_hint(std::string_view prompt) {
  const std::string text = lower(prompt);
  if (has_word(text, "small")) return RoomSize::Small;
  if (has_word(text, "medium") || has_word(text, "medium-sized") || has_word(text, "mid-sized")) {
    return RoomSize::Medium;
  }
  if (has_word(text, "large")) return RoomSize::Large;
  for (std::string_view w : {"snug", "cozy", "cosy", "compact", "tiny", "little"}) {
    if (has_word(text, w)) return RoomSize::Small;
  }
  for (std::string_view w : {"oversized", "big", "huge", "expansive", "grand"}) {
    if (has_word(text, w)) return RoomSize::Large;
  }
  return RoomSize::Medium;
}

AreaBand area_band(RoomSize size) {
  switch (size) {
    case RoomSize::Small: return {6.0, 12.0};
    case RoomSize::Medium: return {12.0, 20.0};
    case RoomSize::Large: return {20.0, 35.0};
  }
  return {12.0, 20.0};
}

nlohmann::json extract_json_object(std::string_view text) {
  std::size_t start = text.find('{');
  while (start != std::string_view::npos) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        auto doc = nlohmann::json::parse(text.substr(start, i - start + 1), nullptr, false);
        if (!doc.is_discarded() && doc.is_object()) return doc;
        break;
      }
    }
    start = text.find('{', start + 1);
  }
  throw ParseError(ParseError::Code::Malformed, "reply contains no JSON object");
}

std::string IdAllocator::next(const std::string& category) {
  return fmt::format("{}_{}", category, counts_[category]++);
}

RoomLevel build_room_level(const std::string& prompt, PlacementOracle& oracle, const BuildConfig& config) {
  if (prompt.find_first_not_of(" \t\r\n") == std::string::npos) throw PreconditionError("prompt is empty");
  const AreaBand band = area_band(size_hint(prompt));
  const double q = config.length_quantum;
  for (int attempt = 1; attempt <= config.attempts; ++attempt) {
    const OracleReply reply = oracle.query(RoomQuery{prompt, attempt});
    nlohmann::json doc;
    try {
      doc = extract_json_object(reply.text);
    } catch (const ParseError&) {
      continue;
    }
    if (!doc.contains("room_type") || !doc["room_type"].is_string() || !doc.contains("length") ||
        !doc.contains("width") || !positive(doc["length"]) || !positive(doc["width"])) {
      continue;
    }
    RoomLevel room;
    room.room_type = lower(doc["room_type"].get<std::string>());
    if (room.room_type.empty()) continue;
    double l = doc["length"].get<double>();
    double w = doc["width"].get<double>();
    const double area = l * w;
    const double target = std::clamp(area, band.lo, band.hi);
    if (target != area) {
      const double s = std::sqrt(target / area);
      l *= s;
      w *= s;
    }
    l = std::max(q, quantize(l, q));
    w = std::max(q, quantize(w, q));
    while (l * w < band.lo - 1e-9) w += q;
    while (l * w > band.hi + 1e-9 && w > q) w -= q;
    room.length = quantize(l, q);
    room.width = quantize(w, q);
    return room;
  }
  exhausted("room", "", config.attempts);
}

std::vector<RegionLevelEntry> build_region_level(const std::string& prompt, const RoomLevel& room,
                                                 PlacementOracle& oracle, const BuildConfig& config) {
  if (!(room.length > 0.0) || !(room.width > 0.0)) throw PreconditionError("room dims must be positive");
  for (int attempt = 1; attempt <= config.attempts; ++attempt) {
    const OracleReply reply = oracle.query(RegionQuery{prompt, room.room_type, room.length, room.width, attempt});
    nlohmann::json doc;
    try {
      doc = extract_json_object(reply.text);
    } catch (const ParseError&) {
      continue;
    }
    if (!doc.contains("regions") || !doc["regions"].is_array()) continue;
    struct Proposed {
      std::string function;
      double fraction;
    };
    std::vector<Proposed> regions;
    bool ok = true;
    for (const auto& item : doc["regions"]) {
      if (!item.is_object() || !item.contains("function") || !item["function"].is_string()) {
        ok = false;
        break;
      }
      const double fraction = item.contains("fraction") && positive(item["fraction"]) ? item["fraction"].get<double>()
                                                                                        : 0.0;
      if (fraction <= 0.0) continue;
      regions.push_back({lower(item["function"].get<std::string>()), fraction});
    }
    if (!ok || regions.empty()) continue;
    if (regions.size() > static_cast<std::size_t>(config.max_regions)) regions.resize(config.max_regions);

    std::vector<RegionLevelEntry> out;
    while (true) {
      const double total = std::accumulate(regions.begin(), regions.end(), 0.0,
                                           [](double s, const Proposed& p) { return s + p.fraction; });
      out.clear();
      double used = 0.0;
      for (std::size_t i = 0; i < regions.size(); ++i) {
        double len = 0.0;
        if (i + 1 == regions.size()) {
          len = room.length - used;
        } else {
          len = quantize(regions[i].fraction / total * room.length, config.length_quantum);
          used += len;
        }
        out.push_back({regions[i].function, len});
      }
      const bool short_region = std::any_of(out.begin(), out.end(), [&](const RegionLevelEntry& r) {
        return r.length < config.min_region_length - 1e-9;
      });
      if (!short_region || regions.size() == 1) break;
      // Drop the smallest proposal (the later one on ties) and renormalize.
      std::size_t smallest = 0;
      for (std::size_t i = 1; i < regions.size(); ++i) {
        if (regions[i].fraction <= regions[smallest].fraction) smallest = i;
      }
      regions.erase(regions.begin() + static_cast<std::ptrdiff_t>(smallest));
    }
    if (out.size() == 1) out.front().length = room.length;
    return out;
  }
  exhausted("region", "", config.attempts);
}

FloorLevel build_floor_object_level(const std::string& prompt, const std::string& room_type,
                                    const RegionPlan& region, PlacementOracle& oracle, const AssetCatalog& catalog,
                                    IdAllocator& ids, SearchTrace& trace, const BuildConfig& config) {
  if (!(region.length > 0.0) || !(region.width > 0.0)) throw PreconditionError("region dims must be positive");
  std::string unknown;
  for (int attempt = 1; attempt <= config.attempts; ++attempt) {
    ObjectsQuery query{prompt, room_type, region.id, region.function, region.length, region.width,
                       catalog.categories(true), attempt};
    const OracleReply reply = oracle.query(query);
    nlohmann::json doc;
    try {
      doc = extract_json_object(reply.text);
    } catch (const ParseError&) {
      continue;
    }
    auto proposals = parse_proposals(doc, catalog, unknown);
    if (!proposals || proposals->empty()) continue;
    bool non_floor = false;
    for (const auto& p : *proposals) non_floor = non_floor || !catalog.at(p.category).floor;
    if (non_floor) continue;
    unknown.clear();

    std::size_t anchor_index = 0;
    if (doc.contains("anchor") && doc["anchor"].is_string()) {
      const std::string anchor = lower(doc["anchor"].get<std::string>());
      for (std::size_t i = 0; i < proposals->size(); ++i) {
        if ((*proposals)[i].category == anchor) {
          anchor_index = i;
          break;
        }
      }
    }
    std::optional<AnchorRule> rule;
    if (doc.contains("anchor_rule") && doc["anchor_rule"].is_string()) {
      rule = parse_anchor_rule(doc["anchor_rule"].get<std::string>());
    }

    const double budget = config.area_guard * region.length * region.width;
    const Proposal& anchor_p = (*proposals)[anchor_index];
    double used = resolved_dims(anchor_p, catalog).footprint_area();
    int count = 1;
    std::vector<char> keep(proposals->size(), 0);
    keep[anchor_index] = 1;
    for (std::size_t i = 0; i < proposals->size(); ++i) {
      if (i == anchor_index) continue;
      const auto& p = (*proposals)[i];
      const double area = resolved_dims(p, catalog).footprint_area();
      if (count >= config.max_floor_objects) {
        reject_build(trace, p.category, fmt::format("{}: more than {} floor objects", region.id,
                                                    config.max_floor_objects));
      } else if (used + area > budget + 1e-9) {
        reject_build(trace, p.category,
                     fmt::format("{}: area guard, footprint ratio would reach {:.2f}", region.id,
                                 (used + area) / (region.length * region.width)));
      } else {
        keep[i] = 1;
        used += area;
        ++count;
      }
    }

    FloorLevel out;
    out.anchor_rule = rule.value_or(AnchorRule::AlongWall);
    for (std::size_t i = 0; i < proposals->size(); ++i) {
      if (!keep[i]) continue;
      const auto& p = (*proposals)[i];
      ObjectSpec spec;
      spec.id = ids.next(p.category);
      spec.category = p.category;
      spec.dims = p.dims;
      spec = resolve_assets({spec}, catalog).front();
      if (i == anchor_index) {
        out.anchor_id = spec.id;
      } else {
        out.edges.push_back(make_edge(spec.id, p));
      }
      out.objects.push_back(std::move(spec));
    }
    return out;
  }
  exhausted("floor object", unknown, config.attempts);
}

SupportedSet build_supported_level(const std::string& prompt, const std::string& room_type,
                                   const ObjectSpec& floor_object, PlacementOracle& oracle,
                                   const AssetCatalog& catalog, IdAllocator& ids, SearchTrace& trace,
                                   const BuildConfig& config) {
  if (!floor_object.supportable) throw NotSupportable(floor_object.id);
  std::string unknown;
  for (int attempt = 1; attempt <= config.attempts; ++attempt) {
    SupportedQuery query{prompt, room_type, floor_object, catalog.categories(false), attempt};
    const OracleReply reply = oracle.query(query);
    nlohmann::json doc;
    try {
      doc = extract_json_object(reply.text);
    } catch (const ParseError&) {
      continue;
    }
    auto proposals = parse_proposals(doc, catalog, unknown);
    if (!proposals) continue;
    unknown.clear();

    std::vector<std::pair<Proposal, Dim3>> kept;
    for (const auto& p : *proposals) {
      const Dim3 d = resolved_dims(p, catalog);
      if (!(d.length < floor_object.dims.length && d.depth < floor_object.dims.depth)) {
        reject_build(trace, p.category,
                     fmt::format("{}: not smaller than the top face of {}", floor_object.id, floor_object.id));
      } else if (kept.size() >= static_cast<std::size_t>(config.max_supported)) {
        reject_build(trace, p.category,
                     fmt::format("{}: more than {} supported objects", floor_object.id, config.max_supported));
      } else {
        kept.emplace_back(p, d);
      }
    }

    SupportedSet out;
    std::size_t anchor = 0;
    for (std::size_t i = 1; i < kept.size(); ++i) {
      if (kept[i].second.footprint_area() > kept[anchor].second.footprint_area()) anchor = i;
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
      ObjectSpec spec;
      spec.id = ids.next(kept[i].first.category);
      spec.category = kept[i].first.category;
      spec.dims = kept[i].second;
      spec.supportable = catalog.at(spec.category).supportable;
      if (i == anchor) {
        out.anchor_id = spec.id;
      } else {
        out.edges.push_back(make_edge(spec.id, kept[i].first));
      }
      out.objects.push_back(std::move(spec));
    }
    return out;
  }
  exhausted("supported", unknown, config.attempts);
}

RoomPlan build_room_plan(const std::string& prompt, PlacementOracle& inner, const AssetCatalog& catalog,
                         SearchTrace& trace, const BuildConfig& config) {
  CountingOracle oracle(inner, trace);
  const RoomLevel room = build_room_level(prompt, oracle, config);
  const auto regions = build_region_level(prompt, room, oracle, config);
  RoomPlan plan;
  plan.room_type = room.room_type;
  plan.length = room.length;
  plan.width = room.width;
  plan.prompt = prompt;
  IdAllocator ids;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    RegionPlan region;
    region.id = fmt::format("region_{}", i);
    region.function = regions[i].function;
    region.length = regions[i].length;
    region.width = room.width;
    FloorLevel floor = build_floor_object_level(prompt, room.room_type, region, oracle, catalog, ids, trace, config);
    region.objects = std::move(floor.objects);
    region.anchor_id = std::move(floor.anchor_id);
    region.anchor_rule = floor.anchor_rule;
    region.edges = std::move(floor.edges);
    for (const auto& obj : region.objects) {
      if (!obj.supportable) continue;
      SupportedSet set = build_supported_level(prompt, room.room_type, obj, oracle, catalog, ids, trace, config);
      if (!set.objects.empty()) region.supported.emplace(obj.id, std::move(set));
    }
    plan.regions.push_back(std::move(region));
  }
  const auto report = validate_room_plan(plan);
  if (!report.empty()) {
    throw CompositionError("built plan is invalid: " + report.front().field + ": " + report.front().message);
  }
  return plan;
}

}  // namespace scenegen
