#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "scenegen/error.hpp"
#include "scenegen/evaluator.hpp"
#include "test_env.hpp"

using namespace scenegen;
using testenv::spec;

namespace {

Scene two_squares(double bx, double by) {
  Scene s;
  s.plan.room_type = "bedroom";
  s.plan.length = 4.0;
  s.plan.width = 3.0;
  RegionPlan r{"r1", "rest", 4.0, 3.0, {spec("a", 1, 1), spec("b", 1, 1)}, "a", AnchorRule::AlongWall, {}, {}};
  r.edges = {{"b", SpatialRelation::PlaceAround, OrientationRule::SameAsAnchor}};
  s.plan.regions = {r};
  s.regions = {{"r1", 0.0, RegionStatus::Solved}};
  s.placements = {{"a", {1.0, 1.0, 0.0}, Yaw::Deg0, {Parent::Kind::Floor, "r1"}},
                  {"b", {bx, by, 0.0}, Yaw::Deg0, {Parent::Kind::Floor, "r1"}}};
  return s;
}

TraceEvent ev(EventKind kind, int layer, int visit, int attempt, const std::string& scope = "region:r1") {
  TraceEvent e;
  e.scope = scope;
  e.layer = layer;
  e.step = layer == 0 ? SearchStep::Anchor : SearchStep::Object;
  e.visit = visit;
  e.attempt = attempt;
  e.kind = kind;
  return e;
}

AblationRun run_of(SearchMode mode, const std::string& prompt, std::uint64_t seed, double placed, int calls) {
  AblationRun r;
  r.mode = mode;
  r.prompt = prompt;
  r.seed = seed;
  r.metrics.placed_ratio = placed;
  r.stats.oracle_calls = calls;
  return r;
}

}  // namespace

TEST(Validity, StackedSquaresOverlapOnce) {
  const ValidityMetrics m = validity_metrics(two_squares(1.0, 1.0));
  EXPECT_EQ(m.overlap_pairs, 1);
  EXPECT_EQ(m.oob_objects, 0);
  EXPECT_DOUBLE_EQ(m.placed_ratio, 1.0);
  EXPECT_NEAR(m.free_area_ratio, 1.0 - 2.0 / 12.0, 1e-12);
}

TEST(Validity, TouchingIsNotOverlap) {
  EXPECT_EQ(validity_metrics(two_squares(2.0, 1.0)).overlap_pairs, 0);
}

TEST(Validity, OutOfRoomAndRelation) {
  // 3.2 m from the anchor center: outside the room and beyond "around".
  const ValidityMetrics m = validity_metrics(two_squares(4.2, 1.0));
  EXPECT_EQ(m.oob_objects, 1);
  EXPECT_EQ(m.relation_violations, 1);
}

TEST(Validity, MissingObjectsLowerPlacedRatio) {
  Scene s = two_squares(3.0, 1.0);
  s.placements.pop_back();
  EXPECT_DOUBLE_EQ(validity_metrics(s).placed_ratio, 0.5);
}

TEST(Validity, SupportedObjectsChecked) {
  Scene s = two_squares(3.0, 1.0);
  s.plan.regions[0].supported["a"] = {{spec("lamp", 0.2, 0.2)}, "lamp", {}};
  s.placements.push_back({"lamp", {1.0, 1.0, 0.5}, Yaw::Deg0, {Parent::Kind::Supporter, "a"}});
  EXPECT_EQ(validity_metrics(s).support_violations, 0);
  s.placements.back().pos.z = 0.3;
  EXPECT_EQ(validity_metrics(s).support_violations, 1);
  s.placements.back().pos = {1.45, 1.0, 0.5};
  EXPECT_EQ(validity_metrics(s).support_violations, 1);
}

TEST(Validity, TreeScenesHaveNoViolations) {
  for (const auto& prompt : testenv::suite_prompts()) {
    const Scene s = testenv::generate(prompt, 7);
    const ValidityMetrics m = validity_metrics(s);
    EXPECT_EQ(m.overlap_pairs + m.oob_objects + m.relation_violations + m.support_violations, 0) << prompt;
  }
}

TEST(Stats, CountsAttemptsAndVisits) {
  SearchTrace t;
  t.record(ev(EventKind::Accepted, 0, 1, 1));
  t.record(ev(EventKind::Rejected, 1, 1, 1));
  t.record(ev(EventKind::Backtrack, 0, 1, 1));
  t.record(ev(EventKind::Rejected, 0, 2, 2));
  t.record(ev(EventKind::Accepted, 0, 2, 3));
  t.record(ev(EventKind::Accepted, 1, 2, 1));
  t.count_oracle_call();
  const SearchStats s = search_stats(t);
  EXPECT_EQ(s.backtracks, 1);
  EXPECT_EQ(s.oracle_calls, 1);
  EXPECT_EQ(s.total_events, 6);
  EXPECT_EQ(s.attempts_per_layer.at(0), 3);
  EXPECT_EQ(s.attempts_per_layer.at(1), 1);
  EXPECT_EQ((s.attempts_per_visit.at({"region:r1", 0, 2})), 3);
  EXPECT_EQ(s.anchor_visits.at("region:r1"), 2);
  EXPECT_EQ(net_acceptances(t), 2);
}

TEST(Stats, DiscardedAcceptancesAreVoided) {
  SearchTrace t;
  t.record(ev(EventKind::Accepted, 0, 1, 1));
  TraceEvent d = ev(EventKind::Rejected, 0, 1, 1);
  d.detail = "discarded: area unsat";
  t.record(d);
  EXPECT_EQ(net_acceptances(t), 0);
}

TEST(Ablation, MeansAndPopulationStd) {
  std::vector<AblationRun> runs;
  for (SearchMode m : {SearchMode::IO, SearchMode::CoT, SearchMode::Tree}) {
    runs.push_back(run_of(m, "p", 0, 0.5, 10));
    runs.push_back(run_of(m, "p", 1, 1.0, 20));
  }
  runs[0].ok = false;
  const AblationReport r = ablation_report(runs);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].mode, SearchMode::IO);
  EXPECT_EQ(r.rows[2].mode, SearchMode::Tree);
  const AblationRow* io = r.row(SearchMode::IO);
  ASSERT_NE(io, nullptr);
  EXPECT_EQ(io->failures, 1);
  EXPECT_DOUBLE_EQ(io->placed_ratio.mean, 0.5);  // failed run counts as 0
  EXPECT_DOUBLE_EQ(io->oracle_calls.mean, 20.0);
  const AblationRow* tree = r.row(SearchMode::Tree);
  EXPECT_DOUBLE_EQ(tree->placed_ratio.mean, 0.75);
  EXPECT_DOUBLE_EQ(tree->placed_ratio.std, 0.25);
  EXPECT_DOUBLE_EQ(tree->oracle_calls.std, 5.0);
}

TEST(Ablation, MismatchedSeedsRejected) {
  std::vector<AblationRun> runs{run_of(SearchMode::CoT, "p", 0, 1, 1), run_of(SearchMode::Tree, "p", 1, 1, 1)};
  EXPECT_THROW(ablation_report(runs, {SearchMode::CoT, SearchMode::Tree}), MismatchedSeeds);
  EXPECT_THROW(ablation_report({}, {SearchMode::Tree}), MismatchedSeeds);
  EXPECT_THROW(ablation_report({run_of(SearchMode::Tree, "p", 0, 1, 1)}, {SearchMode::CoT, SearchMode::Tree}),
               MismatchedSeeds);
  EXPECT_NO_THROW(ablation_report({run_of(SearchMode::Tree, "p", 0, 1, 1)}, {SearchMode::Tree}));
}

TEST(Ablation, TsvLayout) {
  const AblationReport r = ablation_report({run_of(SearchMode::Tree, "p", 0, 1, 4)}, {SearchMode::Tree});
  const std::string tsv = r.to_tsv();
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')),
            "mode\truns\tfailures\tplaced_ratio_mean\tplaced_ratio_std\toverlap_pairs_mean\toverlap_pairs_std\t"
            "oob_objects_mean\toob_objects_std\trelation_violations_mean\trelation_violations_std\t"
            "support_violations_mean\tsupport_violations_std\tfree_area_ratio_mean\tfree_area_ratio_std\t"
            "oracle_calls_mean\toracle_calls_std\tbacktracks_mean\tbacktracks_std");
  EXPECT_NE(tsv.find("\n" + std::string(to_string(SearchMode::Tree)) + "\t1\t0\t1.0000\t0.0000"), std::string::npos);
  EXPECT_NE(r.to_text().find("placed_ratio"), std::string::npos);
}

TEST(Ablation, TreePlacesAtLeastAsMuchAsCot) {
  std::vector<AblationRun> runs;
  const auto prompts = testenv::suite_prompts();
  for (std::size_t i = 0; i < prompts.size(); i += 5) {
    for (SearchMode m : {SearchMode::CoT, SearchMode::Tree}) {
      const Scene s = testenv::generate(prompts[i], 1, m, 0.35);
      AblationRun r;
      r.mode = m;
      r.prompt = prompts[i];
      r.seed = 1;
      r.metrics = validity_metrics(s);
      r.stats = search_stats(s.trace);
      runs.push_back(r);
    }
  }
  const AblationReport rep = ablation_report(runs, {SearchMode::CoT, SearchMode::Tree});
  EXPECT_GE(rep.row(SearchMode::Tree)->placed_ratio.mean, rep.row(SearchMode::CoT)->placed_ratio.mean);
  EXPECT_DOUBLE_EQ(rep.row(SearchMode::CoT)->backtracks.mean, 0.0);
}
