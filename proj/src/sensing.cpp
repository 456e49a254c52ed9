#include "reefcover/sensing.hpp"

#include <algorithm>
#include <cmath>

namespace reefcover::sensing {

namespace {

using geometry::normalize_angle;
using geometry::Vec2;

std::vector<std::pair<Vec2, Vec2>> obstruction_segments(const Scenario& s) {
    std::vector<std::pair<Vec2, Vec2>> segs;
    for (const auto& ob : s.obstacles) {
        const auto& v = ob.shape.vertices;
        for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
            segs.emplace_back(v[j], v[i]);
    }
    const double w = s.arena.width;
    const double h = s.arena.height;
    segs.push_back({{0, 0}, {w, 0}});
    segs.push_back({{w, 0}, {w, h}});
    segs.push_back({{w, h}, {0, h}});
    segs.push_back({{0, h}, {0, 0}});
    return segs;
}

// Exact nearest obstruction within an angular wedge, capped at max_range.
double wedge_distance(const std::vector<std::pair<Vec2, Vec2>>& segs, Vec2 origin,
                      double center, double half_width, double max_range) {
    double best = geometry::kInf;
    for (const auto& [a, b] : segs)
        best = std::min(best,
                        geometry::wedge_segment_distance(origin, center, half_width, a, b));
    return std::min(best, max_range);
}

}  // namespace

int classify_bearing(double bearing, double fov) {
    const double edge = fov / 6.0;
    if (bearing < -edge) return kLeft;
    if (bearing > edge) return kRight;
    return kCenter;
}

ObservationBundle sense(const Scenario& scenario, const Pose& pose,
                        const OccupancyGrid& grid, const SensorConfig& config) {
    (void)grid;
    ObservationBundle bundle;
    bundle.pose = pose;
    bundle.view.fov = config.fov;
    bundle.view.max_range = config.max_range;

    const Vec2 origin = pose.position();
    for (const auto& ooi : scenario.oois) {
        const Vec2 d = ooi.position - origin;
        const double range = d.norm();
        if (range > config.max_range) continue;
        const double bearing = normalize_angle(d.angle() - pose.theta);
        if (std::abs(bearing) > config.fov / 2.0) continue;
        bool blocked = false;
        for (const auto& ob : scenario.obstacles)
            if (geometry::segment_hits_polygon(origin, ooi.position, ob.shape)) {
                blocked = true;
                break;
            }
        if (blocked) continue;
        bundle.view.detections.push_back({ooi.id, bearing, range});
    }
    std::sort(bundle.view.detections.begin(), bundle.view.detections.end(),
              [](const Detection& a, const Detection& b) { return a.ooi_id < b.ooi_id; });

    const auto segs = obstruction_segments(scenario);
    const int sectors = config.radar_sectors;
    bundle.radar.radius = config.radar_radius;
    bundle.radar.sector_distance.resize(static_cast<std::size_t>(sectors));
    for (int k = 0; k < sectors; ++k) {
        const double width = 2.0 * M_PI / sectors;
        const double lo = width * k - M_PI;
        const double center = pose.theta + lo + width / 2.0;
        const double d = wedge_distance(segs, origin, center, width / 2.0,
                                        config.radar_radius);
        if (d < config.radar_radius)
            bundle.radar.sector_distance[static_cast<std::size_t>(k)] = d;
    }

    const double sector_width = config.fov / 3.0;
    for (int s = 0; s < 3; ++s) {
        const double center = pose.theta + (s - 1) * sector_width;
        bundle.forward_obstacle[static_cast<std::size_t>(s)] = wedge_distance(
            segs, origin, center, sector_width / 2.0, config.max_range);
    }
    return bundle;
}

SectorStats summarize(const ObservationBundle& bundle, const OccupancyGrid& grid,
                      const Arena& arena, const CellSet* overlay) {
    const CameraView& view = bundle.view;
    const Pose& pose = bundle.pose;
    SectorStats stats;
    for (const Detection& det : view.detections)
        ++stats.ooi_count[static_cast<std::size_t>(classify_bearing(det.bearing, view.fov))];
    stats.nearest_obstacle = bundle.forward_obstacle;

    // Unexplored fraction over grid cells whose centers fall inside each
    // forward wedge, at camera range and at the extended frontier range.
    const double r = grid.resolution;
    const Vec2 origin = pose.position();
    const double far_range = 3.0 * view.max_range;
    const int i0 = static_cast<int>(std::floor((origin.x - far_range) / r));
    const int i1 = static_cast<int>(std::floor((origin.x + far_range) / r));
    const int j0 = static_cast<int>(std::floor((origin.y - far_range) / r));
    const int j1 = static_cast<int>(std::floor((origin.y + far_range) / r));
    std::array<int, 3> total{0, 0, 0};
    std::array<int, 3> unvisited{0, 0, 0};
    std::array<int, 3> total_far{0, 0, 0};
    std::array<int, 3> unvisited_far{0, 0, 0};
    for (int i = i0; i <= i1; ++i) {
        for (int j = j0; j <= j1; ++j) {
            const Vec2 c{(i + 0.5) * r, (j + 0.5) * r};
            if (!arena.contains(c)) continue;
            const Vec2 d = c - origin;
            const double range = d.norm();
            if (range > far_range || range < 1e-9) continue;
            const double bearing = normalize_angle(d.angle() - pose.theta);
            if (std::abs(bearing) > view.fov / 2.0) continue;
            const int s = classify_bearing(bearing, view.fov);
            const world::CellIndex cell{i, j};
            const bool seen =
                grid.visited(cell) || (overlay && overlay->count(cell) > 0);
            ++total_far[static_cast<std::size_t>(s)];
            if (!seen) ++unvisited_far[static_cast<std::size_t>(s)];
            if (range <= view.max_range) {
                ++total[static_cast<std::size_t>(s)];
                if (!seen) ++unvisited[static_cast<std::size_t>(s)];
            }
        }
    }
    for (int s = 0; s < 3; ++s) {
        stats.unexplored_fraction[static_cast<std::size_t>(s)] =
            total[static_cast<std::size_t>(s)] > 0
                ? static_cast<double>(unvisited[static_cast<std::size_t>(s)]) /
                      total[static_cast<std::size_t>(s)]
                : 0.0;
        stats.unexplored_fraction_far[static_cast<std::size_t>(s)] =
            total_far[static_cast<std::size_t>(s)] > 0
                ? static_cast<double>(unvisited_far[static_cast<std::size_t>(s)]) /
                      total_far[static_cast<std::size_t>(s)]
                : 0.0;
    }
    return stats;
}

}  // namespace reefcover::sensing
