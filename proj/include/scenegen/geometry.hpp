#pragma once

#include "scenegen/types.hpp"

namespace scenegen {

/// Axis-aligned rectangle in meters.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0}; }
  Rect translated(Vec2 offset) const {
    return {min_x + offset.x, min_y + offset.y, max_x + offset.x, max_y + offset.y};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Footprint of an object with the given dims, yaw and center. Yaw 90/270
/// swaps the length and depth extents.
Rect effective_aabb(const Dim3& dims, Yaw yaw, Vec2 center);

double intersection_area(const Rect& a, const Rect& b);

// Interiors intersect. Edge-touching rectangles do not overlap.
bool overlaps(const Rect& a, const Rect& b);

bool contains(const Rect& outer, const Rect& inner, double eps = kLengthEpsilon);

// Euclidean edge-to-edge distance, 0 when the rectangles touch or intersect.
double gap(const Rect& a, const Rect& b);

/// Pose of the object a relation is measured against.
struct AnchorGeometry {
  Rect box;
  Yaw yaw = Yaw::Deg0;

  Vec2 center() const { return box.center(); }
};

/// PlaceFront: center beyond the anchor's front edge, centered within the
/// front edge's extent, gap <= front. PlaceBeside: center beyond one of the
/// anchor's side edges, gap <= beside. PlaceAround: center distance <= around.
bool relation_satisfied(SpatialRelation relation, const Rect& candidate, const AnchorGeometry& anchor,
                        const RelationThresholds& thresholds);

/// Yaw for a non-anchor object. FaceAnchor picks the cardinal direction
/// nearest to (anchor - object); equal components resolve to the x-axis.
/// Throws DegenerateDirection for Face/Back rules when the centers coincide.
Yaw orientation_from_rule(OrientationRule rule, Yaw anchor_yaw, Vec2 anchor_center, Vec2 object_center);

}  // namespace scenegen
