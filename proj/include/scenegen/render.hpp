#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenegen/scene.hpp"
#include "scenegen/trace.hpp"

namespace scenegen {

struct RenderOptions {
  double pixels_per_meter = 100.0;
  double margin = 20.0;  // pixels
};

/// Top-down SVG: room outline, dashed region boundaries, labeled object
/// rectangles with a tick on the facing edge, anchors filled red.
std::string render_svg(const Scene& scene, const RenderOptions& options = {});

/// Placements after replaying the first `step` trace events (step 0: none).
/// Throws std::out_of_range when step exceeds the event count.
std::vector<PlacedObject> replay_placements(const Scene& scene, const std::vector<TraceEvent>& events,
                                            std::size_t step);

/// render_svg of the partial state after `step` events.
std::string render_step_svg(const Scene& scene, const std::vector<TraceEvent>& events, std::size_t step,
                            const RenderOptions& options = {});

}  // namespace scenegen
