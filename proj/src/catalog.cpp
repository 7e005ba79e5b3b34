#include "scenegen/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "scenegen/error.hpp"

namespace scenegen {
namespace {

Dim3 dims_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error("catalog dims must be [length, depth, height]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

bool within(const Dim3& d, const Dim3& lo, const Dim3& hi) {
  return d.length >= lo.length && d.length <= hi.length && d.depth >= lo.depth && d.depth <= hi.depth &&
         d.height >= lo.height && d.height <= hi.height;
}

double fill_and_clamp(double value, double fallback, double lo, double hi) {
  if (!(value > 0.0) || !std::isfinite(value)) return fallback;
  return std::clamp(value, lo, hi);
}

}  // namespace

AssetCatalog::AssetCatalog(std::map<std::string, AssetEntry> entries) : entries_(std::move(entries)) {
  for (const auto& [category, entry] : entries_) {
    if (!entry.dims.valid() || !within(entry.dims, entry.min, entry.max)) {
      throw Error("catalog entry '" + category + "' has defaults outside its range");
    }
  }
}

AssetCatalog AssetCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open asset catalog " + path.string());
  const nlohmann::json doc = nlohmann::json::parse(in);
  std::map<std::string, AssetEntry> entries;
  for (const auto& [category, item] : doc.at("assets").items()) {
    AssetEntry entry;
    entry.dims = dims_from_json(item.at("dims"));
    entry.min = dims_from_json(item.at("min"));
    entry.max = dims_from_json(item.at("max"));
    entry.supportable = item.value("supportable", false);
    entry.floor = item.value("floor", true);
    entries.emplace(category, entry);
  }
  return AssetCatalog(std::move(entries));
}

const AssetEntry& AssetCatalog::at(const std::string& category) const {
  auto it = entries_.find(category);
  if (it == entries_.end()) throw UnknownCategory(category);
  return it->second;
}

std::vector<std::string> AssetCatalog::categories(bool floor) const {
  std::vector<std::string> out;
  for (const auto& [category, entry] : entries_) {
    if (entry.floor == floor) out.push_back(category);
  }
  return out;
}

std::vector<ObjectSpec> resolve_assets(std::vector<ObjectSpec> specs, const AssetCatalog& catalog) {
  for (auto& spec : specs) {
    const AssetEntry& entry = catalog.at(spec.category);
    spec.dims.length = fill_and_clamp(spec.dims.length, entry.dims.length, entry.min.length, entry.max.length);
    spec.dims.depth = fill_and_clamp(spec.dims.depth, entry.dims.depth, entry.min.depth, entry.max.depth);
    spec.dims.height = fill_and_clamp(spec.dims.height, entry.dims.height, entry.min.height, entry.max.height);
    spec.supportable = entry.supportable;
  }
  return specs;
}

}  // namespace scenegen
