#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "scenegen/scene.hpp"

namespace scenegen {

inline constexpr std::string_view kSceneFormat = "scenegen-scene/1";

/// Sorted keys, no whitespace beyond one space after separators, floating
/// numbers with exactly four decimals. Identical documents give identical text.
std::string canonical_dump(const nlohmann::json& doc);

nlohmann::json scene_to_json(const Scene& scene);
/// Reads plan, regions and placements back (trace events are not part of
/// the scene file; only the summary is, and it is ignored here).
Scene scene_from_json(const nlohmann::json& doc);

std::string serialize_scene(const Scene& scene);  // canonical text + newline
void save_scene(const Scene& scene, const std::filesystem::path& path);
Scene load_scene(const std::filesystem::path& path);

/// Trace log: one canonical JSON event per line, in occurrence order.
std::string serialize_trace(const SearchTrace& trace);
std::vector<TraceEvent> parse_trace(std::string_view text);
void save_trace(const SearchTrace& trace, const std::filesystem::path& path);
std::vector<TraceEvent> load_trace(const std::filesystem::path& path);

}  // namespace scenegen
