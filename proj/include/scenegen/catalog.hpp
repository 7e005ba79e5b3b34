#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scenegen/types.hpp"

namespace scenegen {

struct AssetEntry {
  Dim3 dims;  // default
  Dim3 min;
  Dim3 max;
  bool supportable = false;
  bool floor = true;  // false for objects that only ever rest on a supporter
};

/// Local stand-in for 3D asset retrieval: category -> dimensions.
class AssetCatalog {
 public:
  AssetCatalog() = default;
  explicit AssetCatalog(std::map<std::string, AssetEntry> entries);

  /// JSON object keyed by category:
  /// {"bed": {"dims": [l, d, h], "min": [...], "max": [...], "supportable": false, "floor": true}}
  static AssetCatalog load(const std::filesystem::path& path);

  bool contains(const std::string& category) const { return entries_.contains(category); }
  const AssetEntry& at(const std::string& category) const;  // throws UnknownCategory
  std::vector<std::string> categories(bool floor) const;
  const std::map<std::string, AssetEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, AssetEntry> entries_;
};

/// Fills missing (non-positive) dims with catalog defaults, clamps the rest
/// into the catalog range and copies the supportable flag.
std::vector<ObjectSpec> resolve_assets(std::vector<ObjectSpec> specs, const AssetCatalog& catalog);

}  // namespace scenegen
