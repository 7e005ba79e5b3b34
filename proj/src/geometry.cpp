#include "scenegen/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "scenegen/error.hpp"

namespace scenegen {

Rect effective_aabb(const Dim3& dims, Yaw yaw, Vec2 center) {
  const double ex = swaps_extents(yaw) ? dims.depth : dims.length;
  const double ey = swaps_extents(yaw) ? dims.length : dims.depth;
  return {center.x - ex / 2.0, center.y - ey / 2.0, center.x + ex / 2.0, center.y + ey / 2.0};
}

double intersection_area(const Rect& a, const Rect& b) {
  const double w = std::min(a.max_x, b.max_x) - std::max(a.min_x, b.min_x);
  const double h = std::min(a.max_y, b.max_y) - std::max(a.min_y, b.min_y);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

bool overlaps(const Rect& a, const Rect& b) { return intersection_area(a, b) > kAreaEpsilon; }

bool contains(const Rect& outer, const Rect& inner, double eps) {
  return inner.min_x >= outer.min_x - eps && inner.min_y >= outer.min_y - eps && inner.max_x <= outer.max_x + eps &&
         inner.max_y <= outer.max_y + eps;
}

double gap(const Rect& a, const Rect& b) {
  const double dx = std::max({0.0, a.min_x - b.max_x, b.min_x - a.max_x});
  const double dy = std::max({0.0, a.min_y - b.max_y, b.min_y - a.max_y});
  return std::hypot(dx, dy);
}

bool relation_satisfied(SpatialRelation relation, const Rect& candidate, const AnchorGeometry& anchor,
                        const RelationThresholds& thresholds) {
  const Vec2 f = facing(anchor.yaw);
  const Vec2 side{f.y, -f.x};
  const Vec2 ac = anchor.center();
  const Vec2 cc = candidate.center();
  const Vec2 d{cc.x - ac.x, cc.y - ac.y};
  const double along = d.x * f.x + d.y * f.y;
  const double across = d.x * side.x + d.y * side.y;
  // Half extents of the anchor box along its facing and side axes.
  const double half_front = (std::abs(f.x) * anchor.box.width() + std::abs(f.y) * anchor.box.height()) / 2.0;
  const double half_side = (std::abs(side.x) * anchor.box.width() + std::abs(side.y) * anchor.box.height()) / 2.0;

  switch (relation) {
    case SpatialRelation::PlaceFront:
      return along > half_front && std::abs(across) <= half_side + kLengthEpsilon &&
             gap(candidate, anchor.box) <= thresholds.front + kLengthEpsilon;
    case SpatialRelation::PlaceBeside:
      return std::abs(across) > half_side && gap(candidate, anchor.box) <= thresholds.beside + kLengthEpsilon;
    case SpatialRelation::PlaceAround:
      return std::hypot(d.x, d.y) <= thresholds.around + kLengthEpsilon;
  }
  return false;
}

Yaw orientation_from_rule(OrientationRule rule, Yaw anchor_yaw, Vec2 anchor_center, Vec2 object_center) {
  switch (rule) {
    case OrientationRule::SameAsAnchor: return anchor_yaw;
    case OrientationRule::OppositeAnchor: return rotate(anchor_yaw, 2);
    case OrientationRule::FaceAnchor:
    case OrientationRule::BackToAnchor: break;
  }
  const double vx = anchor_center.x - object_center.x;
  const double vy = anchor_center.y - object_center.y;
  if (std::abs(vx) < kLengthEpsilon && std::abs(vy) < kLengthEpsilon) throw DegenerateDirection();
  Yaw toward;
  if (std::abs(vx) >= std::abs(vy)) {
    toward = vx > 0.0 ? Yaw::Deg90 : Yaw::Deg270;
  } else {
    toward = vy > 0.0 ? Yaw::Deg0 : Yaw::Deg180;
  }
  return rule == OrientationRule::FaceAnchor ? toward : rotate(toward, 2);
}

}  // namespace scenegen
