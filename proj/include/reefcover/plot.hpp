#pragma once

#include <string>
#include <vector>

#include "reefcover/metrics.hpp"
#include "reefcover/world.hpp"

namespace reefcover::plot {

// Self-contained SVG: gray obstacle polygons, dots for OOIs, one colored
// polyline per robot trajectory, plus a small legend.
std::string scene_svg(const world::Scenario& scenario,
                      const std::vector<metrics::TrajectoryLog>& trajectories,
                      const std::vector<std::string>& labels);

void write_scene_svg(const world::Scenario& scenario,
                     const std::vector<metrics::TrajectoryLog>& trajectories,
                     const std::vector<std::string>& labels, const std::string& path);

}  // namespace reefcover::plot
