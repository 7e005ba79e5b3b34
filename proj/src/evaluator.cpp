#include "scenegen/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fmt/format.h"

#include "scenegen/error.hpp"

namespace scenegen {
namespace {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

bool global_step(SearchStep s) { return s == SearchStep::Anchor || s == SearchStep::Object; }

}  // namespace

ValidityMetrics validity_metrics(const Scene& scene, const RelationThresholds& thresholds) {
  ValidityMetrics m;
  const Rect room{0.0, 0.0, scene.plan.length, scene.plan.width};
  std::vector<const PlacedObject*> floor;
  std::map<std::string, std::vector<const PlacedObject*>> on;
  for (const auto& p : scene.placements) {
    if (p.parent.kind == Parent::Kind::Floor) {
      floor.push_back(&p);
    } else {
      on[p.parent.id].push_back(&p);
    }
  }
  auto count_overlaps = [&](const std::vector<const PlacedObject*>& group) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        if (overlaps(scene.footprint(*group[i]), scene.footprint(*group[j]))) ++m.overlap_pairs;
      }
    }
  };
  count_overlaps(floor);
  for (const auto& [sid, group] : on) count_overlaps(group);

  double footprint = 0.0;
  for (const PlacedObject* p : floor) {
    const Rect box = scene.footprint(*p);
    if (!contains(room, box)) ++m.oob_objects;
    footprint += box.area();
  }

  for (const auto& [sid, group] : on) {
    const PlacedObject* sup = scene.find(sid);
    const ObjectSpec* sspec = scene.plan.find(sid);
    for (const PlacedObject* p : group) {
      if (!sup || !sspec || !contains(scene.footprint(*sup), scene.footprint(*p)) ||
          std::abs(p->pos.z - sspec->dims.height) > kLengthEpsilon) {
        ++m.support_violations;
      }
    }
  }

  auto check_relations = [&](const std::string& anchor_id, const std::vector<Edge>& edges) {
    const PlacedObject* anchor = scene.find(anchor_id);
    if (!anchor) return;
    const AnchorGeometry geo{scene.footprint(*anchor), anchor->yaw};
    for (const auto& e : edges) {
      const PlacedObject* p = scene.find(e.object_id);
      if (!p) continue;
      if (!relation_satisfied(e.relation, scene.footprint(*p), geo, thresholds)) ++m.relation_violations;
    }
  };
  for (const auto& region : scene.plan.regions) {
    check_relations(region.anchor_id, region.edges);
    for (const auto& [sid, set] : region.supported) check_relations(set.anchor_id, set.edges);
  }

  const std::size_t total = scene.plan.object_count();
  m.placed_ratio = total == 0 ? 1.0 : static_cast<double>(scene.placements.size()) / static_cast<double>(total);
  const double area = scene.plan.length * scene.plan.width;
  m.free_area_ratio = area > 0.0 ? 1.0 - footprint / area : 0.0;
  return m;
}

SearchStats search_stats(const SearchTrace& trace) {
  SearchStats s;
  s.oracle_calls = trace.oracle_calls();
  s.backtracks = trace.count(EventKind::Backtrack);
  s.total_events = static_cast<int>(trace.events().size());
  std::map<std::string, std::set<int>> anchor_visits;
  for (const auto& e : trace.events()) {
    if (!global_step(e.step)) continue;
    int& layer_max = s.attempts_per_layer[e.layer];
    layer_max = std::max(layer_max, e.attempt);
    int& visit_max = s.attempts_per_visit[{e.scope, e.layer, e.visit}];
    visit_max = std::max(visit_max, e.attempt);
    if (e.step == SearchStep::Anchor) anchor_visits[e.scope].insert(e.visit);
  }
  for (const auto& [scope, visits] : anchor_visits) s.anchor_visits[scope] = static_cast<int>(visits.size());
  return s;
}

int net_acceptances(const SearchTrace& trace) {
  int n = 0;
  for (const auto& e : trace.events()) {
    if (e.kind == EventKind::Accepted) ++n;
    if (e.kind == EventKind::Backtrack) --n;
    if (e.kind == EventKind::Rejected && e.detail.rfind("discarded", 0) == 0) --n;
  }
  return n;
}

const AblationRow* AblationReport::row(SearchMode mode) const {
  for (const auto& r : rows) {
    if (r.mode == mode) return &r;
  }
  return nullptr;
}

AblationReport ablation_report(const std::vector<AblationRun>& runs, const std::vector<SearchMode>& modes) {
  if (runs.empty()) throw MismatchedSeeds("no runs to report");
  std::map<SearchMode, std::set<std::pair<std::string, std::uint64_t>>> cells;
  for (SearchMode mode : modes) cells[mode];
  for (const auto& r : runs) {
    if (!cells.contains(r.mode)) throw MismatchedSeeds(fmt::format("run for unexpected mode {}", to_string(r.mode)));
    cells[r.mode].insert({r.prompt, r.seed});
  }
  const auto& reference = cells.begin()->second;
  for (const auto& [mode, set] : cells) {
    if (set.empty()) throw MismatchedSeeds(fmt::format("mode {} has no runs", to_string(mode)));
    if (set != reference) throw MismatchedSeeds(fmt::format("mode {} covers different prompts/seeds", to_string(mode)));
  }

  AblationReport report;
  for (SearchMode mode : {SearchMode::IO, SearchMode::CoT, SearchMode::Tree}) {
    if (!cells.contains(mode)) continue;
    AblationRow row;
    row.mode = mode;
    std::vector<double> placed, overlap, oob, rel, sup, free_area, calls, back;
    for (const auto& r : runs) {
      if (r.mode != mode) continue;
      ++row.runs;
      if (!r.ok) {
        ++row.failures;
        placed.push_back(0.0);
        continue;
      }
      placed.push_back(r.metrics.placed_ratio);
      overlap.push_back(r.metrics.overlap_pairs);
      oob.push_back(r.metrics.oob_objects);
      rel.push_back(r.metrics.relation_violations);
      sup.push_back(r.metrics.support_violations);
      free_area.push_back(r.metrics.free_area_ratio);
      calls.push_back(r.stats.oracle_calls);
      back.push_back(r.stats.backtracks);
    }
    row.placed_ratio = mean_std(placed);
    row.overlap_pairs = mean_std(overlap);
    row.oob_objects = mean_std(oob);
    row.relation_violations = mean_std(rel);
    row.support_violations = mean_std(sup);
    row.free_area_ratio = mean_std(free_area);
    row.oracle_calls = mean_std(calls);
    row.backtracks = mean_std(back);
    report.rows.push_back(row);
  }
  return report;
}

namespace {

struct Column {
  const char* name;
  MeanStd AblationRow::*field;
};

constexpr Column kColumns[] = {
    {"placed_ratio", &AblationRow::placed_ratio},
    {"overlap_pairs", &AblationRow::overlap_pairs},
    {"oob_objects", &AblationRow::oob_objects},
    {"relation_violations", &AblationRow::relation_violations},
    {"support_violations", &AblationRow::support_violations},
    {"free_area_ratio", &AblationRow::free_area_ratio},
    {"oracle_calls", &AblationRow::oracle_calls},
    {"backtracks", &AblationRow::backtracks},
};

}  // namespace

std::string AblationReport::to_tsv() const {
  std::string out = "mode\truns\tfailures";
  for (const auto& c : kColumns) out += fmt::format("\t{}_mean\t{}_std", c.name, c.name);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{}\t{}\t{}", to_string(r.mode), r.runs, r.failures);
    for (const auto& c : kColumns) out += fmt::format("\t{:.4f}\t{:.4f}", (r.*c.field).mean, (r.*c.field).std);
    out += '\n';
  }
  return out;
}

std::string AblationReport::to_text() const {
  std::string out = fmt::format("{:<6}{:>6}{:>6}", "mode", "runs", "fail");
  for (const auto& c : kColumns) out += fmt::format("  {:>21}", c.name);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{:<6}{:>6}{:>6}", to_string(r.mode), r.runs, r.failures);
    for (const auto& c : kColumns) {
      out += fmt::format("  {:>21}", fmt::format("{:.3f} ± {:.3f}", (r.*c.field).mean, (r.*c.field).std));
    }
    out += '\n';
  }
  return out;
}

}  // namespace scenegen
