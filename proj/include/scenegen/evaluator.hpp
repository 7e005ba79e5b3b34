#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "scenegen/scene.hpp"
#include "scenegen/trace.hpp"

namespace scenegen {

struct ValidityMetrics {
  int overlap_pairs = 0;        // floor pairs, and pairs sharing a supporter
  int oob_objects = 0;          // floor footprints not inside the room
  int relation_violations = 0;  // placed objects whose edge relation fails
  int support_violations = 0;   // supported objects off their top face or at the wrong height
  double placed_ratio = 0.0;    // placed / objects in the plan
  double free_area_ratio = 0.0;  // 1 - floor footprint / room area
};

ValidityMetrics validity_metrics(const Scene& scene, const RelationThresholds& thresholds = {});

struct SearchStats {
  int oracle_calls = 0;
  int backtracks = 0;
  /// Highest attempt number seen per global layer (over all scopes/visits).
  std::map<int, int> attempts_per_layer;
  /// Highest attempt number per (scope, layer, visit).
  std::map<std::tuple<std::string, int, int>, int> attempts_per_visit;
  /// Anchor-layer visits per scope.
  std::map<std::string, int> anchor_visits;
  int total_events = 0;
};

SearchStats search_stats(const SearchTrace& trace);

/// Accepted minus invalidated acceptances (Backtrack, and acceptances
/// discarded when an area turned out Unsat). Equals the number of objects
/// placed by the search.
int net_acceptances(const SearchTrace& trace);

struct AblationRun {
  SearchMode mode = SearchMode::Tree;
  std::string prompt;
  std::uint64_t seed = 0;
  bool ok = true;      // false when the run failed outright (oracle failure, ...)
  std::string error;
  ValidityMetrics metrics;
  SearchStats stats;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct AblationRow {
  SearchMode mode = SearchMode::Tree;
  int runs = 0;
  int failures = 0;
  MeanStd placed_ratio;
  MeanStd overlap_pairs;
  MeanStd oob_objects;
  MeanStd relation_violations;
  MeanStd support_violations;
  MeanStd free_area_ratio;
  MeanStd oracle_calls;
  MeanStd backtracks;
};

struct AblationReport {
  std::vector<AblationRow> rows;  // IO, CoT, Tree order; modes present only

  const AblationRow* row(SearchMode mode) const;
  std::string to_tsv() const;
  std::string to_text() const;
};

/// Groups runs by mode. Every mode must cover the same (prompt, seed) set;
/// throws MismatchedSeeds otherwise or when no runs are given. Failed runs
/// count as placed_ratio 0 and contribute no other metric.
AblationReport ablation_report(const std::vector<AblationRun>& runs,
                               const std::vector<SearchMode>& modes = {SearchMode::IO, SearchMode::CoT,
                                                                       SearchMode::Tree});

}  // namespace scenegen
