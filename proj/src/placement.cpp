#include "scenegen/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "scenegen/error.hpp"

namespace scenegen {
namespace {

double snap_down(double value, double cell_size) {
  if (value < 0.0) return value;
  return std::floor(value / cell_size + 1e-9) * cell_size;
}

double snap_nearest(double value, double cell_size) {
  if (value < 0.0) return value;
  return std::round(value / cell_size) * cell_size;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-9; }

int count_wall_contacts(const RegionFrame& frame, const Rect& box) {
  int n = 0;
  if (near(box.min_y, 0.0)) ++n;
  if (near(box.max_y, frame.width)) ++n;
  if (frame.walls.left && near(box.min_x, 0.0)) ++n;
  if (frame.walls.right && near(box.max_x, frame.length)) ++n;
  return n;
}

double front_area(const RegionFrame& frame, const Rect& box, Yaw yaw) {
  double area = 0.0;
  switch (yaw) {
    case Yaw::Deg0: area = (frame.width - box.max_y) * frame.length; break;
    case Yaw::Deg180: area = box.min_y * frame.length; break;
    case Yaw::Deg90: area = (frame.length - box.max_x) * frame.width; break;
    case Yaw::Deg270: area = box.min_x * frame.width; break;
  }
  return std::max(0.0, area);
}

AnchorOption make_option(const RegionFrame& frame, std::string name, const Dim3& dims, Yaw yaw, double min_x,
                         double min_y) {
  const Rect extent = effective_aabb(dims, yaw, {0.0, 0.0});
  AnchorOption opt;
  opt.name = std::move(name);
  opt.yaw = yaw;
  opt.center = {min_x + extent.width() / 2.0, min_y + extent.height() / 2.0};
  opt.box = effective_aabb(dims, yaw, opt.center);
  opt.fits = contains(frame.bounds(), opt.box);
  opt.wall_contacts = count_wall_contacts(frame, opt.box);
  opt.front_area = front_area(frame, opt.box, yaw);
  return opt;
}

}  // namespace

ThoughtVerdict evaluate_thought(const PlacementProblem& problem, Vec2 center, Yaw yaw) {
  const Rect box = effective_aabb(problem.object.dims, yaw, center);
  if (!contains(problem.frame.bounds(), box)) return {false, "bounds"};
  for (const auto& fp : problem.placed) {
    if (overlaps(box, fp.box)) return {false, "overlap"};
  }
  if (!relation_satisfied(problem.edge.relation, box, problem.anchor.geometry(), problem.thresholds)) {
    return {false, "relation"};
  }
  return {true, ""};
}

Axis primary_axis(Side side) {
  return side == Side::Left || side == Side::Right ? Axis::Columns : Axis::Rows;
}

Axis secondary_axis(Side side) {
  return primary_axis(side) == Axis::Columns ? Axis::Rows : Axis::Columns;
}

Side front_side(Yaw anchor_yaw) {
  switch (anchor_yaw) {
    case Yaw::Deg0: return Side::Top;
    case Yaw::Deg90: return Side::Right;
    case Yaw::Deg180: return Side::Bottom;
    case Yaw::Deg270: return Side::Left;
  }
  return Side::Top;
}

std::vector<Side> side_tie_order(Yaw anchor_yaw) {
  std::vector<Side> order{front_side(anchor_yaw)};
  for (Side s : {Side::Right, Side::Left, Side::Bottom, Side::Top}) {
    if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
  }
  return order;
}

Yaw provisional_yaw(const PlacementProblem& problem, Side side) {
  const Yaw anchor_yaw = problem.anchor.yaw;
  Yaw toward = Yaw::Deg0;
  switch (side) {
    case Side::Right: toward = Yaw::Deg270; break;
    case Side::Left: toward = Yaw::Deg90; break;
    case Side::Top: toward = Yaw::Deg180; break;
    case Side::Bottom: toward = Yaw::Deg0; break;
  }
  switch (problem.edge.orientation_rule) {
    case OrientationRule::SameAsAnchor: return anchor_yaw;
    case OrientationRule::OppositeAnchor: return rotate(anchor_yaw, 2);
    case OrientationRule::FaceAnchor: return toward;
    case OrientationRule::BackToAnchor: return rotate(toward, 2);
  }
  return anchor_yaw;
}

CellSpan footprint_span(const Dim3& dims, Yaw yaw, double cell_size) {
  const Rect extent = effective_aabb(dims, yaw, {0.0, 0.0});
  return {std::max(1, static_cast<int>(std::ceil(extent.width() / cell_size - 1e-9))),
          std::max(1, static_cast<int>(std::ceil(extent.height() / cell_size - 1e-9)))};
}

OccupancyGrid problem_grid(const PlacementProblem& problem) {
  return rasterize(problem.frame.length, problem.frame.width, problem.placed, problem.frame.cell_size,
                   problem.frame.walls);
}

Run columns_of(Side side, Run primary, Run secondary) {
  return primary_axis(side) == Axis::Columns ? primary : secondary;
}

Run rows_of(Side side, Run primary, Run secondary) {
  return primary_axis(side) == Axis::Rows ? primary : secondary;
}

Vec2 run_center(Run cols, Run rows, double cell_size) {
  return {(cols.start + cols.count / 2.0) * cell_size, (rows.start + rows.count / 2.0) * cell_size};
}

CandidatePlacement resolve_placement(const PlacementProblem& problem, Side side, Run primary, Run secondary) {
  CandidatePlacement out;
  out.side = side;
  out.primary = primary;
  out.secondary = secondary;
  out.center = run_center(columns_of(side, primary, secondary), rows_of(side, primary, secondary),
                          problem.frame.cell_size);
  try {
    out.yaw = orientation_from_rule(problem.edge.orientation_rule, problem.anchor.yaw, problem.anchor.center,
                                    out.center);
  } catch (const DegenerateDirection&) {
    out.yaw = provisional_yaw(problem, side);
  }
  out.box = effective_aabb(problem.object.dims, out.yaw, out.center);
  return out;
}

std::vector<CandidatePlacement> legal_placements(const PlacementProblem& problem, const OccupancyGrid& grid,
                                                 Side side) {
  const std::vector<int> cands = candidate_cells(grid, side, problem.anchor.box());
  std::vector<char> mask(grid.size(), 0);
  for (int idx : cands) mask[static_cast<std::size_t>(idx)] = 1;

  const CellSpan span = footprint_span(problem.object.dims, provisional_yaw(problem, side), problem.frame.cell_size);
  const bool columns_first = primary_axis(side) == Axis::Columns;
  std::vector<CandidatePlacement> out;
  for (int c0 = 0; c0 + span.cols <= grid.cols; ++c0) {
    for (int r0 = 0; r0 + span.rows <= grid.rows; ++r0) {
      bool all = true;
      for (int r = r0; r < r0 + span.rows && all; ++r) {
        for (int c = c0; c < c0 + span.cols; ++c) {
          if (!mask[static_cast<std::size_t>(grid.index(r, c))]) {
            all = false;
            break;
          }
        }
      }
      if (!all) continue;
      const Run cols{c0, span.cols};
      const Run rows{r0, span.rows};
      const CandidatePlacement p =
          columns_first ? resolve_placement(problem, side, cols, rows) : resolve_placement(problem, side, rows, cols);
      if (evaluate_thought(problem, p.center, p.yaw).ok) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const CandidatePlacement& a, const CandidatePlacement& b) {
    return std::tie(a.primary.start, a.secondary.start) < std::tie(b.primary.start, b.secondary.start);
  });
  return out;
}

int side_score(const PlacementProblem& problem, const OccupancyGrid& grid, Side side) {
  std::vector<char> covered(grid.size(), 0);
  for (const auto& p : legal_placements(problem, grid, side)) {
    const Run cols = columns_of(side, p.primary, p.secondary);
    const Run rows = rows_of(side, p.primary, p.secondary);
    for (int r = rows.start; r < rows.end(); ++r) {
      for (int c = cols.start; c < cols.end(); ++c) covered[static_cast<std::size_t>(grid.index(r, c))] = 1;
    }
  }
  return static_cast<int>(std::count(covered.begin(), covered.end(), 1));
}

std::vector<int> secondary_cells(const OccupancyGrid& grid, const std::vector<int>& candidates, Side side,
                                 Run primary) {
  std::vector<char> mask(grid.size(), 0);
  for (int idx : candidates) mask[static_cast<std::size_t>(idx)] = 1;
  std::vector<int> out;
  if (primary_axis(side) == Axis::Columns) {
    for (int r = 0; r < grid.rows; ++r) {
      bool all = true;
      for (int c = primary.start; c < primary.end(); ++c) {
        all = all && c < grid.cols && mask[static_cast<std::size_t>(grid.index(r, c))];
      }
      if (!all) continue;
      for (int c = primary.start; c < primary.end(); ++c) out.push_back(grid.index(r, c));
    }
  } else {
    for (int c = 0; c < grid.cols; ++c) {
      bool all = true;
      for (int r = primary.start; r < primary.end(); ++r) {
        all = all && r < grid.rows && mask[static_cast<std::size_t>(grid.index(r, c))];
      }
      if (!all) continue;
      for (int r = primary.start; r < primary.end(); ++r) out.push_back(grid.index(r, c));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double run_distance(Run run, Axis axis, const AnchorPlacement& anchor, double cell_size) {
  const double center = (run.start + run.count / 2.0) * cell_size;
  return std::abs(center - (axis == Axis::Columns ? anchor.center.x : anchor.center.y));
}

std::vector<AnchorOption> anchor_options(const RegionFrame& frame, AnchorRule rule, const Dim3& dims) {
  const double L = frame.length;
  const double W = frame.width;
  const double cs = frame.cell_size;
  auto extent = [&](Yaw yaw) { return effective_aabb(dims, yaw, {0.0, 0.0}); };
  std::vector<AnchorOption> out;
  switch (rule) {
    case AnchorRule::AlongWall: {
      const Rect ey0 = extent(Yaw::Deg0);
      const Rect ey90 = extent(Yaw::Deg90);
      out.push_back(make_option(frame, "bottom", dims, Yaw::Deg0, snap_down((L - ey0.width()) / 2.0, cs), 0.0));
      out.push_back(make_option(frame, "top", dims, Yaw::Deg180, snap_down((L - ey0.width()) / 2.0, cs),
                                W - ey0.height()));
      out.push_back(make_option(frame, "left", dims, Yaw::Deg90, 0.0, snap_down((W - ey90.height()) / 2.0, cs)));
      out.push_back(make_option(frame, "right", dims, Yaw::Deg270, L - ey90.width(),
                                snap_down((W - ey90.height()) / 2.0, cs)));
      break;
    }
    case AnchorRule::AtCorner: {
      struct Corner {
        const char* name;
        bool left;
        bool bottom;
      };
      for (const Corner corner : {Corner{"bottom-left", true, true}, Corner{"bottom-right", false, true},
                                  Corner{"top-left", true, false}, Corner{"top-right", false, false}}) {
        const Yaw yaw_y = corner.bottom ? Yaw::Deg0 : Yaw::Deg180;
        const Yaw yaw_x = corner.left ? Yaw::Deg90 : Yaw::Deg270;
        const double depth_y = W - extent(yaw_y).height();
        const double depth_x = L - extent(yaw_x).width();
        const Yaw yaw = depth_x > depth_y + 1e-9 ? yaw_x : yaw_y;
        const Rect e = extent(yaw);
        out.push_back(make_option(frame, corner.name, dims, yaw, corner.left ? 0.0 : L - e.width(),
                                  corner.bottom ? 0.0 : W - e.height()));
      }
      break;
    }
    case AnchorRule::InCenter: {
      struct Facing {
        const char* name;
        Yaw yaw;
      };
      for (const Facing f : {Facing{"face-top", Yaw::Deg0}, Facing{"face-right", Yaw::Deg90},
                             Facing{"face-bottom", Yaw::Deg180}, Facing{"face-left", Yaw::Deg270}}) {
        const Rect e = extent(f.yaw);
        out.push_back(make_option(frame, f.name, dims, f.yaw, snap_nearest((L - e.width()) / 2.0, cs),
                                  snap_nearest((W - e.height()) / 2.0, cs)));
      }
      break;
    }
  }
  return out;
}

std::vector<std::size_t> rank_anchor_options(const std::vector<AnchorOption>& options) {
  std::vector<std::size_t> order(options.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    const auto& o = options[i];
    return std::make_tuple(o.fits ? 0 : 1, -o.wall_contacts, -std::llround(o.front_area * 1e6), i);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  return order;
}

}  // namespace scenegen
