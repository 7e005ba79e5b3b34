#include "scenegen/grid.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "scenegen/error.hpp"

namespace scenegen {
namespace {

constexpr std::array<std::string_view, 4> kSideNames{"Left", "Right", "Top", "Bottom"};

int cells_for(double extent, double cell_size) {
  return std::max(1, static_cast<int>(std::ceil(extent / cell_size - 1e-9)));
}

}  // namespace

std::string_view to_string(Side side) { return kSideNames[static_cast<std::size_t>(side)]; }

std::optional<Side> parse_side(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) key.push_back(static_cast<char>(std::tolower(c)));
  }
  for (std::size_t i = 0; i < kSideNames.size(); ++i) {
    std::string name(kSideNames[i]);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    if (name == key) return static_cast<Side>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Axis axis) { return axis == Axis::Columns ? "columns" : "rows"; }

int grid_cols(double length, double cell_size) { return cells_for(length, cell_size); }
int grid_rows(double width, double cell_size) { return cells_for(width, cell_size); }

Rect OccupancyGrid::cell_rect(int row, int col) const {
  return {col * cell_size, row * cell_size, std::min((col + 1) * cell_size, length),
          std::min((row + 1) * cell_size, width)};
}

OccupancyGrid rasterize(double length, double width, std::span<const Footprint> placed, double cell_size,
                        RegionWalls walls) {
  if (!(cell_size > 0.0)) throw PreconditionError("cell_size must be positive");
  OccupancyGrid grid;
  grid.cols = grid_cols(length, cell_size);
  grid.rows = grid_rows(width, cell_size);
  grid.cell_size = cell_size;
  grid.length = length;
  grid.width = width;
  grid.walls = walls;
  grid.state.assign(static_cast<std::size_t>(grid.rows * grid.cols), CellState::Free);
  grid.owner.assign(grid.state.size(), std::string());

  const Rect region{0.0, 0.0, length, width};
  for (const auto& fp : placed) {
    if (!contains(region, fp.box)) throw OutOfRegion(fp.id);
  }
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      const Rect cell = grid.cell_rect(row, col);
      const auto idx = static_cast<std::size_t>(grid.index(row, col));
      for (const auto& fp : placed) {
        if (!overlaps(cell, fp.box)) continue;
        if (fp.anchor) {
          grid.state[idx] = CellState::AnchorOccupied;
          grid.owner[idx] = fp.id;
          break;
        }
        if (grid.state[idx] == CellState::Free) {
          grid.state[idx] = CellState::Occupied;
          grid.owner[idx] = fp.id;
        }
      }
    }
  }
  return grid;
}

OccupancyGrid rasterize(const RegionPlan& region, std::span<const PlacedObject> placed, double cell_size,
                        RegionWalls walls) {
  std::vector<Footprint> footprints;
  footprints.reserve(placed.size());
  for (const auto& obj : placed) {
    const ObjectSpec* spec = region.find(obj.spec_id);
    if (spec == nullptr) throw PreconditionError("placed object '" + obj.spec_id + "' is not in region " + region.id);
    footprints.push_back({obj.spec_id, effective_aabb(spec->dims, obj.yaw, obj.center()), obj.spec_id == region.anchor_id});
  }
  return rasterize(region.length, region.width, footprints, cell_size, walls);
}

std::vector<int> candidate_cells(const OccupancyGrid& grid, Side side, const Rect& anchor_box) {
  std::vector<int> out;
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      if (grid.at(row, col) != CellState::Free) continue;
      const Rect cell = grid.cell_rect(row, col);
      bool on_side = false;
      switch (side) {
        case Side::Right: on_side = cell.min_x >= anchor_box.max_x - kLengthEpsilon; break;
        case Side::Left: on_side = cell.max_x <= anchor_box.min_x + kLengthEpsilon; break;
        case Side::Top: on_side = cell.min_y >= anchor_box.max_y - kLengthEpsilon; break;
        case Side::Bottom: on_side = cell.max_y <= anchor_box.min_y + kLengthEpsilon; break;
      }
      if (on_side) out.push_back(grid.index(row, col));
    }
  }
  return out;
}

}  // namespace scenegen
