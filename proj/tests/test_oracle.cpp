#include <cstdlib>
#include <set>

#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "mock_server.hpp"
#include "scenegen/emoji.hpp"
#include "scenegen/error.hpp"
#include "scenegen/heuristic_oracle.hpp"
#include "scenegen/live_oracle.hpp"
#include "scenegen/prompts.hpp"
#include "scenegen/transcript.hpp"
#include "test_env.hpp"

using namespace scenegen;
using testenv::spec;

namespace {

HeuristicOracle det(std::uint64_t seed, double p_adv = 0.0) {
  return HeuristicOracle(testenv::oracle_templates(), {seed, p_adv});
}

PlacementProblem problem(double L, double W, const AnchorPlacement& anchor, std::vector<Footprint> blockers,
                         const ObjectSpec& obj, Edge edge) {
  PlacementProblem p;
  p.frame = {L, W, 0.25, {true, true}};
  p.anchor = anchor;
  p.placed = {{anchor.id, anchor.box(), true}};
  for (auto& b : blockers) p.placed.push_back(std::move(b));
  p.object = obj;
  edge.object_id = obj.id;
  p.edge = edge;
  return p;
}

SideQuery side_query(const PlacementProblem& p) {
  SideQuery q;
  q.scope = "region:test";
  q.grid_prompt = serialize_grid_prompt(problem_grid(p), EmojiMap{});
  q.problem = p;
  return q;
}

// Primary-axis query for `side`, with every side cell named.
CellsQuery primary_query(const PlacementProblem& p, Side side) {
  const OccupancyGrid grid = problem_grid(p);
  const auto cands = candidate_cells(grid, side, p.anchor.box());
  CellsQuery q;
  q.scope = "region:test";
  q.problem = p;
  q.side = side;
  q.axis = primary_axis(side);
  q.emoji_map = assign_emojis(cands, testenv::resources().vocabulary);
  q.grid_prompt = serialize_grid_prompt(grid, q.emoji_map);
  const CellSpan span = footprint_span(p.object.dims, provisional_yaw(p, side), p.frame.cell_size);
  q.expected_count = q.axis == Axis::Columns ? span.cols : span.rows;
  return q;
}

RunSelection parse_primary(const CellsQuery& q, const std::string& reply) {
  return parse_run_selection(reply, q.emoji_map, static_cast<std::size_t>(q.expected_count), q.axis,
                             problem_grid(q.problem));
}

}  // namespace

TEST(HeuristicSide, OnlyRightIsFree) {
  const AnchorPlacement anchor{"sofa_0", "sofa", {1.0, 1.0, 0.8}, {1.5, 1.0}, Yaw::Deg0};
  const PlacementProblem p =
      problem(3, 2, anchor,
              {{"shelf", Rect{0, 0, 1, 2}, false}, {"a", Rect{1, 1.5, 3, 2}, false}, {"b", Rect{1, 0, 3, 0.5}, false}},
              spec("side_table_0", 0.5, 0.5), {"", SpatialRelation::PlaceAround, OrientationRule::SameAsAnchor});
  auto oracle = det(0);
  EXPECT_EQ(oracle.query(side_query(p)).text, "Right");
  const auto ranked = bf::ranked_sides(p, {});
  EXPECT_EQ(ranked.front().first, Side::Right);
  EXPECT_GT(ranked.front().second, 0);
  for (std::size_t i = 1; i < ranked.size(); ++i) EXPECT_EQ(ranked[i].second, 0);
}

TEST(HeuristicSide, BesideTieGoesRight) {
  const AnchorPlacement anchor{"bed_0", "bed", {1.6, 2.0, 0.5}, {2.0, 1.0}, Yaw::Deg0};
  const PlacementProblem p = problem(4, 3, anchor, {}, spec("nightstand_0", 0.5, 0.4),
                                     {"", SpatialRelation::PlaceBeside, OrientationRule::SameAsAnchor});
  const auto ranked = bf::ranked_sides(p, {});
  ASSERT_GE(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].first, Side::Right);
  EXPECT_EQ(ranked[1].first, Side::Left);
  EXPECT_EQ(ranked[0].second, ranked[1].second);
  auto oracle = det(0);
  EXPECT_EQ(oracle.query(side_query(p)).text, "Right");
}

TEST(HeuristicSide, PropertyBestSideMatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const double L = 1.0 + 0.25 * static_cast<int>(rng() % 9);
    const double W = 1.0 + 0.25 * static_cast<int>(rng() % 9);
    const Yaw yaw = static_cast<Yaw>(rng() % 4);
    const Dim3 ad{0.5 + 0.25 * static_cast<int>(rng() % 4), 0.5 + 0.25 * static_cast<int>(rng() % 3), 0.5};
    const Rect ext = effective_aabb(ad, yaw, {0, 0});
    if (ext.width() > L || ext.height() > W) continue;
    const Vec2 c{ext.width() / 2 + 0.25 * std::floor(u(rng) * (L - ext.width()) / 0.25),
                 ext.height() / 2 + 0.25 * std::floor(u(rng) * (W - ext.height()) / 0.25)};
    const AnchorPlacement anchor{"a", "a", ad, c, yaw};
    const auto rel = static_cast<SpatialRelation>(rng() % 3);
    const auto orient = static_cast<OrientationRule>(rng() % 4);
    const PlacementProblem p = problem(L, W, anchor, {}, spec("o", 0.25 + 0.25 * (rng() % 3), 0.25 + 0.25 * (rng() % 2)),
                                       {"", rel, orient});
    const auto ranked = bf::ranked_sides(p, {});
    const auto mine = rank_sides(p, {});
    ASSERT_EQ(mine, ranked) << "instance " << i;
    auto oracle = det(static_cast<std::uint64_t>(i));
    const std::string reply = oracle.query(side_query(p)).text;
    for (const auto& [side, score] : ranked) ASSERT_LE(score, bf::covered(p, *parse_side(reply)));
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(HeuristicCells, NearerRunChosen) {
  // Anchor at the left wall facing +x; runs to its right at 0.25 m and
  // 0.75 m from the anchor center line... measured along columns.
  const AnchorPlacement anchor{"desk_0", "desk", {1.0, 0.5, 0.75}, {0.25, 1.0}, Yaw::Deg90};
  const PlacementProblem p = problem(2.0, 2.0, anchor, {}, spec("chair_0", 0.5, 0.5),
                                     {"", SpatialRelation::PlaceAround, OrientationRule::FaceAnchor});
  const CellsQuery q = primary_query(p, Side::Right);
  ASSERT_EQ(q.expected_count, 2);
  auto oracle = det(0);
  const RunSelection sel = parse_primary(q, oracle.query(q).text);
  const auto best = bf::nearest(p, Side::Right);
  ASSERT_TRUE(best);
  EXPECT_EQ(sel.run.start, best->primary_start);
  EXPECT_EQ(sel.run.count, 2);
  // Frozen: cols 2..3 (center 0.75 m, 0.5 m from the anchor center) beat cols 3..4.
  EXPECT_EQ(sel.run.start, 2);
}

TEST(HeuristicCells, AdversarialPicksWorstRun) {
  const AnchorPlacement anchor{"desk_0", "desk", {1.0, 0.5, 0.75}, {0.25, 1.0}, Yaw::Deg90};
  const PlacementProblem p = problem(2.0, 2.0, anchor, {}, spec("chair_0", 0.5, 0.5),
                                     {"", SpatialRelation::PlaceAround, OrientationRule::FaceAnchor});
  const CellsQuery q = primary_query(p, Side::Right);
  const auto legal = bf::legal(p, Side::Right);
  ASSERT_FALSE(legal.empty());
  // Worst = largest (distance, start) over distinct primary runs.
  const double cs = 0.25;
  std::pair<long long, int> worst{-1, -1};
  for (const auto& pl : legal) {
    const double d = std::abs((pl.primary_start + pl.primary_count / 2.0) * cs - anchor.center.x);
    worst = std::max(worst, std::make_pair(std::llround(d * 1e6), pl.primary_start));
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto oracle = det(seed, 1.0);
    EXPECT_EQ(parse_primary(q, oracle.query(q).text).run.start, worst.second);
  }
}

TEST(HeuristicCells, NoLegalRunRepliesNone) {
  const AnchorPlacement anchor{"bed_0", "bed", {2.0, 2.0, 0.5}, {1.0, 1.0}, Yaw::Deg0};
  const PlacementProblem p = problem(2.0, 2.0, anchor, {}, spec("x", 0.5, 0.5),
                                     {"", SpatialRelation::PlaceAround, OrientationRule::SameAsAnchor});
  CellsQuery q = primary_query(p, Side::Right);
  auto oracle = det(0);
  EXPECT_EQ(oracle.query(q).text, "none");
}

TEST(HeuristicEval, ZeroCandidateSideIsNo) {
  const AnchorPlacement anchor{"bed_0", "bed", {1.0, 1.0, 0.5}, {1.5, 0.5}, Yaw::Deg0};
  const PlacementProblem p = problem(2.0, 2.0, anchor, {}, spec("x", 0.5, 0.5),
                                     {"", SpatialRelation::PlaceAround, OrientationRule::SameAsAnchor});
  auto oracle = det(0);
  SideEvalQuery q{"region:test", "", p, Side::Right, 1, 1};
  EXPECT_FALSE(parse_eval_reply(oracle.query(q).text).ok);  // anchor touches the right wall
  q.side = Side::Left;
  EXPECT_TRUE(parse_eval_reply(oracle.query(q).text).ok);
}

TEST(HeuristicAnchor, BestOptionThenWorstWhenAdversarial) {
  AnchorQuery q;
  q.frame = {3.0, 4.0, 0.25, {true, true}};
  q.object = spec("bed_0", 2.0, 1.6, 0.5, "bed");
  q.rule = AnchorRule::AlongWall;
  const auto options = anchor_options(q.frame, q.rule, q.object.dims);
  const auto rank = bf::anchor_rank(options);
  EXPECT_EQ(det(0).query(q).text, options[rank.front()].name);
  q.excluded = {options[rank.front()].name};
  EXPECT_EQ(det(0).query(q).text, options[rank[1]].name);
  q.excluded.clear();
  EXPECT_EQ(det(0, 1.0).query(q).text, options[rank.back()].name);
}

TEST(HeuristicOracle, DeterministicAcrossInstances) {
  const RoomQuery q{"A medium bedroom", 1};
  EXPECT_EQ(det(3).query(q).text, det(3).query(q).text);
  std::set<std::string> replies;
  for (std::uint64_t s = 0; s < 10; ++s) replies.insert(det(s).query(q).text);
  EXPECT_GT(replies.size(), 1u);
  EXPECT_THROW(HeuristicOracle(testenv::oracle_templates(), {0, 1.5}), ConfigError);
}

TEST(StructuralKey, IndependentOfTemplates) {
  const RoomQuery a{"x", 1};
  const RoomQuery b{"x", 2};
  EXPECT_NE(structural_key(a), structural_key(b));
  EXPECT_EQ(structural_key(a), structural_key(RoomQuery{"x", 1}));
  EXPECT_EQ(fnv1a64_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a64_hex("a"), "af63dc4c8601ec8c");
}

TEST(EvalReply, Parsing) {
  EXPECT_TRUE(parse_eval_reply("Yes, plenty of room").ok);
  EXPECT_TRUE(parse_eval_reply("  true").ok);
  EXPECT_FALSE(parse_eval_reply("No.").ok);
  EXPECT_FALSE(parse_eval_reply("").ok);
  EXPECT_EQ(parse_eval_reply("no, it is blocked").rationale, "it is blocked");
}

TEST(Templates, SideListsAllFourSides) {
  const AnchorPlacement anchor{"bed_0", "bed", {1.6, 2.0, 0.5}, {2.0, 1.0}, Yaw::Deg0};
  const PlacementProblem p = problem(4, 3, anchor, {}, spec("nightstand_0", 0.5, 0.4, 0.55, "nightstand"),
                                     {"", SpatialRelation::PlaceBeside, OrientationRule::SameAsAnchor});
  const auto msgs = testenv::prompt_templates().render(side_query(p));
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].role, "system");
  EXPECT_EQ(msgs[1].role, "user");
  EXPECT_NE(msgs[1].content.find("Left, Right, Top, Bottom"), std::string::npos);
  EXPECT_NE(msgs[1].content.find("red_square"), std::string::npos);
}

TEST(Templates, CellsStatesColumnCount) {
  const AnchorPlacement anchor{"bed_0", "bed", {1.6, 2.0, 0.5}, {2.0, 1.0}, Yaw::Deg0};
  const PlacementProblem p = problem(4, 3, anchor, {}, spec("nightstand_0", 0.5, 0.4, 0.55, "nightstand"),
                                     {"", SpatialRelation::PlaceBeside, OrientationRule::SameAsAnchor});
  const CellsQuery q = primary_query(p, Side::Right);
  ASSERT_EQ(q.expected_count, 2);
  const auto msgs = testenv::prompt_templates().render(q);
  EXPECT_NE(msgs[1].content.find("occupies two columns"), std::string::npos) << msgs[1].content;
  EXPECT_NE(msgs[1].content.find(q.emoji_map.entries().front().second), std::string::npos);
}

TEST(Templates, RoomAsksForLengthAndWidth) {
  const auto msgs = testenv::prompt_templates().render(RoomQuery{"A modern bedroom", 1});
  EXPECT_NE(msgs[1].content.find("length and width"), std::string::npos);
  EXPECT_NE(msgs[1].content.find("A modern bedroom"), std::string::npos);
  EXPECT_NE(msgs[1].content.find("common sense"), std::string::npos);
}

TEST(Templates, MissingAndUnknownVariables) {
  const PromptTemplates empty;
  EXPECT_THROW(empty.render(RoomQuery{"x", 1}), MissingTemplate);
  EXPECT_THROW(render_template("{{nope}}", {}), Error);
  EXPECT_EQ(render_template("a {{b}} c", {{"b", "B"}}), "a B c");
  EXPECT_EQ(count_word(2), "two");
  EXPECT_EQ(count_word(40), "40");
}

TEST(Templates, FingerprintTracksText) {
  const auto& t = testenv::prompt_templates();
  const RoomQuery q{"A bedroom", 1};
  EXPECT_EQ(t.fingerprint(q), fnv1a64_hex(t.canonical_text(q)));
  EXPECT_NE(t.fingerprint(q), t.fingerprint(RoomQuery{"A bedroom", 2}));
}

TEST(Transcript, SerializeRoundTrip) {
  Transcript t;
  t.meta = {"model-x", "2026-01-01T00:00:00Z", 7};
  t.records = {{"00000000000000aa", "Right"}, {"00000000000000bb", "line one\nline \"two\""}};
  EXPECT_EQ(Transcript::parse(t.serialize()), t);
  EXPECT_THROW(Transcript::parse("not json\n"), Error);
}

TEST(Transcript, RecordThenReplay) {
  auto inner = det(4);
  RecordingOracle rec(inner, testenv::prompt_templates(), {"heuristic", "t", 4});
  const std::vector<OracleQuery> queries{RoomQuery{"A kitchen", 1}, RoomQuery{"A kitchen", 2},
                                         RegionQuery{"A kitchen", "kitchen", 4, 3, 1}};
  std::vector<std::string> replies;
  for (const auto& q : queries) replies.push_back(rec.query(q).text);
  rec.query(queries[0]);
  const Transcript t = rec.transcript();
  EXPECT_EQ(t.records.size(), 3u);

  ReplayOracle replay(Transcript::parse(t.serialize()), testenv::prompt_templates());
  for (std::size_t i = 0; i < queries.size(); ++i) EXPECT_EQ(replay.query(queries[i]).text, replies[i]);
  try {
    replay.query(RoomQuery{"A bathroom", 1});
    FAIL();
  } catch (const FingerprintMiss& e) {
    EXPECT_NE(e.query_text().find("A bathroom"), std::string::npos);
  }
}

TEST(Transcript, OtherTemplateVersionMisses) {
  auto inner = det(0);
  RecordingOracle rec(inner, testenv::prompt_templates(), {"heuristic", "t", 0});
  rec.query(RoomQuery{"A kitchen", 1});
  PromptTemplates edited({{"system", "You are terse."}, {"room", "Room for: {{prompt}} ({{attempt}})"}});
  ReplayOracle replay(rec.transcript(), edited);
  EXPECT_THROW(replay.query(RoomQuery{"A kitchen", 1}), FingerprintMiss);
}

TEST(LiveOracle, SendsChatCompletionRequest) {
  nlohmann::json seen;
  std::string auth;
  testenv::MockChatServer server([&](const nlohmann::json& req, const std::string& a) {
    seen = req;
    auth = a;
    return testenv::MockResponse{200, testenv::completion_body("Right")};
  });
  LiveConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.model = "test-model";
  LiveOracle oracle(cfg, testenv::prompt_templates(), "secret");
  const OracleReply r = oracle.query(RoomQuery{"A bedroom", 1});
  EXPECT_EQ(r.text, "Right");
  EXPECT_EQ(r.kind, QueryKind::Room);
  EXPECT_EQ(auth, "Bearer secret");
  EXPECT_EQ(seen["model"], "test-model");
  EXPECT_EQ(seen["temperature"], 0.0);
  ASSERT_EQ(seen["messages"].size(), 2u);
  EXPECT_EQ(seen["messages"][1]["content"], testenv::prompt_templates().render(RoomQuery{"A bedroom", 1})[1].content);
}

TEST(LiveOracle, RetriesOnceThenFails) {
  int calls = 0;
  testenv::MockChatServer server([&](const nlohmann::json&, const std::string&) {
    return ++calls == 1 ? testenv::MockResponse{503, "busy"} : testenv::MockResponse{200, testenv::completion_body("ok")};
  });
  LiveConfig cfg{server.endpoint(), "m"};
  LiveOracle oracle(cfg, testenv::prompt_templates(), "k");
  EXPECT_EQ(oracle.query(RoomQuery{"x", 1}).text, "ok");
  EXPECT_EQ(calls, 2);

  testenv::MockChatServer down([](const nlohmann::json&, const std::string&) { return testenv::MockResponse{500, "boom"}; });
  LiveOracle failing({down.endpoint(), "m"}, testenv::prompt_templates(), "k");
  try {
    failing.query(RoomQuery{"x", 1});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.status(), 500);
  }
  EXPECT_EQ(down.requests(), 2);
}

TEST(LiveOracle, MalformedBodyIsOracleFailure) {
  testenv::MockChatServer server([](const nlohmann::json&, const std::string&) {
    return testenv::MockResponse{200, R"({"choices": []})"};
  });
  LiveOracle oracle({server.endpoint(), "m"}, testenv::prompt_templates(), "k");
  EXPECT_THROW(oracle.query(RoomQuery{"x", 1}), OracleFailure);
}

TEST(LiveOracle, Configuration) {
  LiveConfig cfg{"ftp://host/x", "m"};
  EXPECT_THROW(LiveOracle(cfg, testenv::prompt_templates(), "k"), ConfigError);
  cfg.endpoint = "http://127.0.0.1:1/v1";
  cfg.api_key_env = "SCENEGEN_TEST_UNSET_KEY";
  ::unsetenv("SCENEGEN_TEST_UNSET_KEY");
  EXPECT_THROW(LiveOracle::from_env(cfg, testenv::prompt_templates()), ConfigError);
  EXPECT_THROW(LiveConfig::load("/nonexistent/live.json"), ConfigError);
}
