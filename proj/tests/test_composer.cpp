#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "scenegen/error.hpp"
#include "scenegen/evaluator.hpp"
#include "scenegen/scene.hpp"
#include "test_env.hpp"

using namespace scenegen;
using testenv::spec;

namespace {

constexpr double kEps = 1e-9;

RoomPlan three_regions() {
  RoomPlan plan;
  plan.room_type = "living room";
  plan.length = 6.0;
  plan.width = 3.0;
  plan.regions = {
      RegionPlan{"r1", "seating", 1.5, 3.0, {spec("a", 1.0, 1.0)}, "a", AnchorRule::AlongWall, {}, {}},
      RegionPlan{"r2", "media", 1.5, 3.0, {spec("b", 1.0, 1.0)}, "b", AnchorRule::AlongWall, {}, {}},
      RegionPlan{"r3", "reading", 3.0, 3.0, {spec("c", 1.0, 1.0)}, "c", AnchorRule::AlongWall, {}, {}},
  };
  return plan;
}

PlacedObject at(const std::string& id, double x, double y, Yaw yaw = Yaw::Deg0) { return {id, {x, y, 0.0}, yaw, {}}; }

}  // namespace

TEST(Compose, OffsetsAreRunningSums) {
  EXPECT_EQ(region_offsets(three_regions()), (std::vector<double>{0.0, 1.5, 3.0}));
}

TEST(Compose, TranslatesRegionLocalPoses) {
  RoomPlan plan = three_regions();
  plan.regions[1].objects = {spec("b", 0.5, 0.5)};
  const Scene s = compose(plan, {{"r1", {at("a", 0.5, 0.5)}}, {"r2", {at("b", 1.0, 2.0)}}, {"r3", {at("c", 1.5, 1.5)}}});
  const PlacedObject* b = s.find("b");
  ASSERT_NE(b, nullptr);
  // Local (1.0, 2.0) in the second region lands at (2.5, 2.0).
  EXPECT_NEAR(b->pos.x, 2.5, kEps);
  EXPECT_NEAR(b->pos.y, 2.0, kEps);
  EXPECT_EQ(b->parent.kind, Parent::Kind::Floor);
  EXPECT_EQ(b->parent.id, "r2");
  EXPECT_NEAR(s.find("c")->pos.x, 4.5, kEps);
  ASSERT_EQ(s.regions.size(), 3u);
  EXPECT_NEAR(s.regions[2].x_offset, 3.0, kEps);
}

TEST(Compose, ExampleOffsetInSecondRegion) {
  RoomPlan plan;
  plan.length = 7.0;
  plan.width = 4.0;
  plan.regions = {RegionPlan{"r1", "x", 3.0, 4.0, {spec("a", 1, 1)}, "a", AnchorRule::AlongWall, {}, {}},
                  RegionPlan{"r2", "y", 4.0, 4.0, {spec("b", 0.5, 0.5)}, "b", AnchorRule::AlongWall, {}, {}}};
  const Scene s = compose(plan, {{"r1", {at("a", 0.5, 0.5)}}, {"r2", {at("b", 1.0, 2.0)}}});
  EXPECT_NEAR(s.find("b")->pos.x, 4.0, kEps);
  EXPECT_NEAR(s.find("b")->pos.y, 2.0, kEps);
}

TEST(Compose, SingleRegionIsIdentity) {
  RoomPlan plan;
  plan.length = 3.0;
  plan.width = 3.0;
  plan.regions = {RegionPlan{"r1", "x", 3.0, 3.0, {spec("a", 1, 1)}, "a", AnchorRule::AlongWall, {}, {}}};
  const Scene s = compose(plan, {{"r1", {at("a", 0.7, 1.1, Yaw::Deg90)}}});
  ASSERT_EQ(s.placements.size(), 1u);
  EXPECT_NEAR(s.placements[0].pos.x, 0.7, kEps);
  EXPECT_NEAR(s.placements[0].pos.y, 1.1, kEps);
  EXPECT_EQ(s.placements[0].yaw, Yaw::Deg90);
}

TEST(Compose, MissingRegionIsUnsat) {
  const Scene s = compose(three_regions(), {{"r1", {at("a", 0.5, 0.5)}}});
  EXPECT_EQ(s.regions[0].status, RegionStatus::Solved);
  EXPECT_EQ(s.regions[1].status, RegionStatus::Unsat);
  EXPECT_EQ(s.regions[2].status, RegionStatus::Unsat);
  EXPECT_EQ(s.placements.size(), 1u);
}

TEST(Compose, CrossRegionOverlapThrows) {
  // "a" pokes 0.25 m past its region's right edge into "b".
  EXPECT_THROW(compose(three_regions(), {{"r1", {at("a", 1.25, 1.0)}}, {"r2", {at("b", 0.5, 1.0)}}}),
               CompositionError);
}

TEST(Compose, OutsideRoomThrows) {
  EXPECT_THROW(compose(three_regions(), {{"r1", {at("a", 0.5, 2.8)}}}), CompositionError);
}

TEST(RoomFrame, LampOnNightstand) {
  const PlacedObject lamp{"lamp_0", {0.1, 0.1, 0.0}, Yaw::Deg0, {}};
  const PlacedObject stand{"ns_0", {4.2, 0.3, 0.0}, Yaw::Deg0, {}};
  const PlacedObject r = to_room_frame(lamp, stand, 0.55);
  EXPECT_NEAR(r.pos.x, 4.3, kEps);
  EXPECT_NEAR(r.pos.y, 0.4, kEps);
  EXPECT_NEAR(r.pos.z, 0.55, kEps);
  EXPECT_EQ(r.yaw, Yaw::Deg0);
}

TEST(RoomFrame, RotatedSupporterMatchesRotationMatrix) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    const Yaw sy = static_cast<Yaw>(rng() % 4);
    const Yaw ly = static_cast<Yaw>(rng() % 4);
    const PlacedObject local{"o", {u(rng), u(rng), 0.0}, ly, {}};
    const PlacedObject sup{"s", {2.0 + u(rng), 2.0 + u(rng), 0.0}, sy, {}};
    const PlacedObject r = to_room_frame(local, sup, 0.7);
    const Vec2 d = bf::rotate_local(local.center(), sy);
    ASSERT_NEAR(r.pos.x, sup.pos.x + d.x, kEps);
    ASSERT_NEAR(r.pos.y, sup.pos.y + d.y, kEps);
    ASSERT_NEAR(r.pos.z, 0.7, kEps);
    ASSERT_EQ(degrees(r.yaw), (degrees(ly) + degrees(sy)) % 360);
  }
}

TEST(RoomFrame, QuarterTurnExample) {
  // Facing +x, a point 0.2 m ahead of the supporter center moves along +x.
  const PlacedObject local{"o", {0.0, 0.2, 0.0}, Yaw::Deg0, {}};
  const PlacedObject sup{"s", {1.0, 1.0, 0.0}, Yaw::Deg90, {}};
  const PlacedObject r = to_room_frame(local, sup, 0.5);
  EXPECT_NEAR(r.pos.x, 1.2, kEps);
  EXPECT_NEAR(r.pos.y, 1.0, kEps);
  EXPECT_EQ(r.yaw, Yaw::Deg90);
}

TEST(AttachSupported, ChecksSupporterAndTopFace) {
  RoomPlan plan;
  plan.length = 3.0;
  plan.width = 3.0;
  RegionPlan r{"r1", "x", 3.0, 3.0, {spec("ns_0", 0.5, 0.4, 0.55, "nightstand")}, "ns_0", AnchorRule::AlongWall,
               {}, {}};
  r.supported["ns_0"] = {{spec("lamp_0", 0.2, 0.2, 0.4, "lamp")}, "lamp_0", {}};
  plan.regions = {r};
  const Scene base = compose(plan, {{"r1", {at("ns_0", 1.0, 0.2)}}});
  const Scene s = attach_supported(base, {{"ns_0", {PlacedObject{"lamp_0", {0.1, 0.05, 0.55}, Yaw::Deg0, {}}}}});
  const PlacedObject* lamp = s.find("lamp_0");
  ASSERT_NE(lamp, nullptr);
  EXPECT_NEAR(lamp->pos.x, 1.1, kEps);
  EXPECT_NEAR(lamp->pos.y, 0.25, kEps);
  EXPECT_NEAR(lamp->pos.z, 0.55, kEps);
  EXPECT_EQ(lamp->parent.kind, Parent::Kind::Supporter);
  EXPECT_THROW(attach_supported(base, {{"ns_0", {PlacedObject{"lamp_0", {0.3, 0.0, 0.55}, Yaw::Deg0, {}}}}}),
               CompositionError);
  EXPECT_THROW(attach_supported(base, {{"ghost", {PlacedObject{"lamp_0", {0, 0, 0}, Yaw::Deg0, {}}}}}),
               CompositionError);
}

TEST(ComposeProperty, GeneratedScenesHaveNoCrossRegionOverlap) {
  const auto prompts = testenv::suite_prompts();
  ASSERT_EQ(prompts.size(), 100u);
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    const Scene s = testenv::generate(prompts[i], i);
    const Rect room{0, 0, s.plan.length, s.plan.width};
    std::vector<std::pair<std::string, Rect>> floor;
    for (const auto& p : s.placements) {
      if (p.parent.kind != Parent::Kind::Floor) continue;
      floor.emplace_back(p.parent.id, s.footprint(p));
      EXPECT_TRUE(contains(room, floor.back().second)) << prompts[i] << " " << p.spec_id;
    }
    for (std::size_t a = 0; a < floor.size(); ++a) {
      for (std::size_t b = a + 1; b < floor.size(); ++b) {
        ASSERT_FALSE(overlaps(floor[a].second, floor[b].second)) << prompts[i];
      }
    }
    const ValidityMetrics m = validity_metrics(s);
    EXPECT_EQ(m.overlap_pairs, 0) << prompts[i];
    EXPECT_EQ(m.oob_objects, 0) << prompts[i];
    EXPECT_EQ(m.support_violations, 0) << prompts[i];
  }
}
