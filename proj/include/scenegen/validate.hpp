#pragma once

#include <string>
#include <vector>

#include "scenegen/types.hpp"

namespace scenegen {

struct Violation {
  std::string field;    // e.g. "regions[1].edges"
  std::string message;  // e.g. "duplicate edge for 'nightstand_0'"

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every RoomPlan/RegionPlan invariant. Empty result means valid.
std::vector<Violation> validate_room_plan(const RoomPlan& plan);

}  // namespace scenegen
