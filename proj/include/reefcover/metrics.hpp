#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reefcover/world.hpp"

namespace reefcover::metrics {

using world::Ooi;
using world::Pose;
using world::Scenario;

struct TrajectoryLog {
    std::vector<Pose> poses;
    std::vector<std::string> events;
};

struct MetricsReport {
    double total_length = 0.0;
    int covered_ooi_count = 0;
    double coverage_length = 0.0;
    double coverage_ratio = 0.0;  // percent
    std::optional<double> ooi_density;     // count per meter of total length
    std::optional<double> ooi_efficiency;  // count per meter of coverage length
};

double total_length(const TrajectoryLog& traj);

// OOIs whose minimum distance to the path polyline is within `radius`;
// counted once each.
int covered_oois(const TrajectoryLog& traj, const std::vector<Ooi>& oois,
                 double radius = 0.7);
// Deduplicated across robots.
int covered_oois_team(const std::vector<TrajectoryLog>& trajs,
                      const std::vector<Ooi>& oois, double radius = 0.7);

// Sum of segment lengths whose midpoint lies within `radius` of any OOI.
double coverage_length(const TrajectoryLog& traj, const std::vector<Ooi>& oois,
                       double radius);

// OOI-rich region = union of coverage discs around OOIs, discretized at
// `resolution`; percent of rich cells whose centers are within `radius` of
// the union of all robots' paths.
double coverage_ratio(const std::vector<TrajectoryLog>& trajs, const Scenario& scenario,
                      double radius, double resolution);

MetricsReport derive_indicators(double total_len, int covered_count, double cov_len,
                                double ratio_percent);

MetricsReport report_for(const std::vector<TrajectoryLog>& trajs,
                         const Scenario& scenario, double radius, double resolution);

}  // namespace reefcover::metrics
