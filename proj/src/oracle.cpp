#include "scenegen/oracle.hpp"

#include <cctype>

#include "fmt/format.h"

#include "scenegen/json_io.hpp"

namespace scenegen {
namespace {

nlohmann::json runs_json(const std::vector<Run>& runs) {
  auto out = nlohmann::json::array();
  for (const Run& r : runs) out.push_back({r.start, r.count});
  return out;
}

nlohmann::json emoji_json(const EmojiMap& emap) {
  auto out = nlohmann::json::array();
  for (const auto& [cell, name] : emap.entries()) out.push_back({cell, name});
  return out;
}

struct KeyBuilder {
  nlohmann::json operator()(const RoomQuery& q) const {
    return {{"kind", "room"}, {"prompt", q.prompt}, {"attempt", q.attempt}};
  }
  nlohmann::json operator()(const RegionQuery& q) const {
    return {{"kind", "region"}, {"prompt", q.prompt},   {"room_type", q.room_type},
            {"length", q.length}, {"width", q.width}, {"attempt", q.attempt}};
  }
  nlohmann::json operator()(const ObjectsQuery& q) const {
    return {{"kind", "objects"},     {"prompt", q.prompt},     {"room_type", q.room_type},
            {"region", q.region_id}, {"function", q.function}, {"length", q.length},
            {"width", q.width},      {"categories", q.categories}, {"attempt", q.attempt}};
  }
  nlohmann::json operator()(const SupportedQuery& q) const {
    return {{"kind", "supported"},          {"prompt", q.prompt},         {"room_type", q.room_type},
            {"object", q.floor_object}, {"categories", q.categories}, {"attempt", q.attempt}};
  }
  nlohmann::json operator()(const AnchorQuery& q) const {
    return {{"kind", "anchor"},     {"scope", q.scope},     {"frame", q.frame},
            {"object", q.object},   {"rule", std::string(to_string(q.rule))},
            {"options", q.options}, {"excluded", q.excluded}, {"attempt", q.attempt}};
  }
  nlohmann::json operator()(const SideQuery& q) const {
    auto excluded = nlohmann::json::array();
    for (Side s : q.excluded) excluded.push_back(std::string(to_string(s)));
    return {{"kind", "side"}, {"scope", q.scope}, {"problem", q.problem}, {"excluded", excluded},
            {"round", q.round}, {"attempt", q.attempt}};
  }
  nlohmann::json operator()(const CellsQuery& q) const {
    nlohmann::json j = {{"kind", "cells"},
                        {"scope", q.scope},
                        {"problem", q.problem},
                        {"side", std::string(to_string(q.side))},
                        {"axis", std::string(to_string(q.axis))},
                        {"emojis", emoji_json(q.emoji_map)},
                        {"count", q.expected_count},
                        {"excluded", runs_json(q.excluded)},
                        {"round", q.round},
                        {"attempt", q.attempt}};
    if (q.primary) j["primary"] = {q.primary->start, q.primary->count};
    return j;
  }
  nlohmann::json operator()(const SideEvalQuery& q) const {
    return {{"kind", "side_eval"}, {"scope", q.scope}, {"problem", q.problem},
            {"side", std::string(to_string(q.side))}, {"round", q.round}, {"attempt", q.attempt}};
  }
  nlohmann::json operator()(const FullLayoutQuery& q) const { return {{"kind", "full_layout"}, {"plan", q.plan}}; }
};

}  // namespace

QueryKind kind_of(const OracleQuery& query) { return static_cast<QueryKind>(query.index()); }

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::Room: return "room";
    case QueryKind::Region: return "region";
    case QueryKind::Objects: return "objects";
    case QueryKind::Supported: return "supported";
    case QueryKind::Anchor: return "anchor";
    case QueryKind::Side: return "side";
    case QueryKind::Cells: return "cells";
    case QueryKind::SideEval: return "side_eval";
    case QueryKind::FullLayout: return "full_layout";
  }
  return "room";
}

bool is_spatial(QueryKind kind) {
  return kind == QueryKind::Anchor || kind == QueryKind::Side || kind == QueryKind::Cells ||
         kind == QueryKind::SideEval;
}

EvalVerdict parse_eval_reply(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && !std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t j = i;
  while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
  std::string word;
  for (char c : text.substr(i, j - i)) word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  EvalVerdict v;
  v.ok = word == "yes" || word == "true";
  std::size_t k = j;
  while (k < text.size() && (std::isspace(static_cast<unsigned char>(text[k])) || text[k] == ',' ||
                             text[k] == '.' || text[k] == ':' || text[k] == '-')) {
    ++k;
  }
  v.rationale = std::string(text.substr(std::min(k, text.size())));
  return v;
}

std::string structural_key(const OracleQuery& query) { return std::visit(KeyBuilder{}, query).dump(); }

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view text) { return fmt::format("{:016x}", fnv1a64(text)); }

}  // namespace scenegen
