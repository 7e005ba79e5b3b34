#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenegen/geometry.hpp"
#include "scenegen/types.hpp"

namespace scenegen {

enum class CellState : std::uint8_t { Free, Occupied, AnchorOccupied };

enum class Side { Left, Right, Top, Bottom };
std::string_view to_string(Side side);
std::optional<Side> parse_side(std::string_view text);

// Columns: the cells of a run share a row and span consecutive columns.
enum class Axis { Columns, Rows };
std::string_view to_string(Axis axis);

/// Which region edges are real room walls. Top and bottom always are, since
/// regions span the full room width; left/right are region boundaries unless
/// the region sits at the end of the room.
struct RegionWalls {
  bool left = true;
  bool right = true;

  friend bool operator==(const RegionWalls&, const RegionWalls&) = default;
};

struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Consecutive cells along one axis: columns [start, start + count) or rows.
struct Run {
  int start = 0;
  int count = 0;

  int end() const { return start + count; }
  friend bool operator==(const Run&, const Run&) = default;
};

/// Top-down discretization of a region. Row 0 is the bottom (y = 0) edge,
/// column 0 the left (x = 0) edge. Cell index = row * cols + col.
struct OccupancyGrid {
  int rows = 0;
  int cols = 0;
  double cell_size = 0.0;
  double length = 0.0;  // region x-extent
  double width = 0.0;   // region y-extent
  RegionWalls walls;
  std::vector<CellState> state;
  std::vector<std::string> owner;  // object id per occupied cell, empty when free

  int index(int row, int col) const { return row * cols + col; }
  Cell cell(int index) const { return {index / cols, index % cols}; }
  CellState at(int row, int col) const { return state[static_cast<std::size_t>(index(row, col))]; }
  // Cell rectangle clipped to the region extent.
  Rect cell_rect(int row, int col) const;
  std::size_t size() const { return state.size(); }
};

struct Footprint {
  std::string id;
  Rect box;
  bool anchor = false;
};

int grid_cols(double length, double cell_size);
int grid_rows(double width, double cell_size);

/// A cell is occupied iff it intersects a footprint with positive area;
/// cells touching the anchor are AnchorOccupied. Throws OutOfRegion.
OccupancyGrid rasterize(double length, double width, std::span<const Footprint> placed, double cell_size,
                        RegionWalls walls = {});

/// Resolves dims from the region's object specs; the region anchor is marked.
OccupancyGrid rasterize(const RegionPlan& region, std::span<const PlacedObject> placed, double cell_size,
                        RegionWalls walls = {});

/// Free cells lying entirely on `side` of the anchor box, in index order.
std::vector<int> candidate_cells(const OccupancyGrid& grid, Side side, const Rect& anchor_box);

}  // namespace scenegen
