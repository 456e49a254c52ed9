#pragma once

#include <array>
#include <optional>
#include <vector>

#include "reefcover/world.hpp"

namespace reefcover::sensing {

using world::Arena;
using world::CellSet;
using world::OccupancyGrid;
using world::Pose;
using world::Scenario;

struct SensorConfig {
    double fov = 1.5;          // camera field of view (rad)
    double max_range = 3.0;    // camera detection range (m)
    double radar_radius = 3.0;
    int radar_sectors = 8;
};

struct Detection {
    int ooi_id = 0;
    double bearing = 0.0;  // relative to heading, (-pi, pi]
    double range = 0.0;
};

struct CameraView {
    double fov = 1.5;
    double max_range = 3.0;
    std::vector<Detection> detections;  // ordered by ooi_id
};

// Per-sector nearest obstruction distance. Sector k covers the
// heading-relative arc [2*pi*k/K - pi, 2*pi*(k+1)/K - pi). Arena walls count
// as obstructions; empty optional means nothing within radius.
struct RadarMap {
    double radius = 3.0;
    std::vector<std::optional<double>> sector_distance;

    int sector_count() const { return static_cast<int>(sector_distance.size()); }
};

struct ObservationBundle {
    CameraView view;
    RadarMap radar;
    Pose pose;
    // Exact nearest obstruction per forward camera sector, capped at
    // max_range (obstacles and arena walls).
    std::array<double, 3> forward_obstacle{0.0, 0.0, 0.0};
};

// Forward left/center/right split at bearings +-fov/6. Sector labels follow
// the steering sign convention (negative delta steers toward negative
// bearings), so index 0 ("left") spans bearings below -fov/6.
enum ForwardSector { kLeft = 0, kCenter = 1, kRight = 2 };

struct SectorStats {
    std::array<int, 3> ooi_count{0, 0, 0};
    std::array<double, 3> nearest_obstacle{0.0, 0.0, 0.0};  // capped at max_range
    std::array<double, 3> unexplored_fraction{0.0, 0.0, 0.0};
    // Same wedges extended to 3x camera range (clipped to the arena); gives
    // the backend a frontier pull beyond the myopic sensing horizon.
    std::array<double, 3> unexplored_fraction_far{0.0, 0.0, 0.0};
};

int classify_bearing(double bearing, double fov);

ObservationBundle sense(const Scenario& scenario, const Pose& pose,
                        const OccupancyGrid& grid, const SensorConfig& config);

// `overlay` adds peer-explored cells on top of the local grid when computing
// unexplored fractions.
SectorStats summarize(const ObservationBundle& bundle, const OccupancyGrid& grid,
                      const Arena& arena, const CellSet* overlay = nullptr);

}  // namespace reefcover::sensing
