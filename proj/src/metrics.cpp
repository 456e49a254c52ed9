#include "reefcover/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace reefcover::metrics {

namespace {
using geometry::Vec2;

std::vector<Vec2> polyline(const TrajectoryLog& traj) {
    std::vector<Vec2> pts;
    pts.reserve(traj.poses.size());
    for (const Pose& p : traj.poses) pts.push_back(p.position());
    return pts;
}
}  // namespace

double total_length(const TrajectoryLog& traj) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < traj.poses.size(); ++k)
        sum += (traj.poses[k + 1].position() - traj.poses[k].position()).norm();
    return sum;
}

int covered_oois(const TrajectoryLog& traj, const std::vector<Ooi>& oois,
                 double radius) {
    const std::vector<Vec2> path = polyline(traj);
    int count = 0;
    for (const Ooi& ooi : oois)
        if (geometry::point_polyline_distance(ooi.position, path) <= radius) ++count;
    return count;
}

int covered_oois_team(const std::vector<TrajectoryLog>& trajs,
                      const std::vector<Ooi>& oois, double radius) {
    std::vector<std::vector<Vec2>> paths;
    paths.reserve(trajs.size());
    for (const TrajectoryLog& t : trajs) paths.push_back(polyline(t));
    int count = 0;
    for (const Ooi& ooi : oois) {
        for (const auto& path : paths) {
            if (geometry::point_polyline_distance(ooi.position, path) <= radius) {
                ++count;
                break;
            }
        }
    }
    return count;
}

double coverage_length(const TrajectoryLog& traj, const std::vector<Ooi>& oois,
                       double radius) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < traj.poses.size(); ++k) {
        const Vec2 a = traj.poses[k].position();
        const Vec2 b = traj.poses[k + 1].position();
        const Vec2 mid = (a + b) * 0.5;
        for (const Ooi& ooi : oois) {
            if ((mid - ooi.position).norm() <= radius) {
                sum += (b - a).norm();
                break;
            }
        }
    }
    return sum;
}

double coverage_ratio(const std::vector<TrajectoryLog>& trajs, const Scenario& scenario,
                      double radius, double resolution) {
    std::vector<std::vector<Vec2>> paths;
    for (const TrajectoryLog& t : trajs)
        if (!t.poses.empty()) paths.push_back(polyline(t));

    const int nx = static_cast<int>(std::ceil(scenario.arena.width / resolution));
    const int ny = static_cast<int>(std::ceil(scenario.arena.height / resolution));
    long rich = 0;
    long covered = 0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const Vec2 c{(i + 0.5) * resolution, (j + 0.5) * resolution};
            bool is_rich = false;
            for (const Ooi& ooi : scenario.oois) {
                if ((c - ooi.position).norm() <= radius) {
                    is_rich = true;
                    break;
                }
            }
            if (!is_rich) continue;
            ++rich;
            for (const auto& path : paths) {
                if (geometry::point_polyline_distance(c, path) <= radius) {
                    ++covered;
                    break;
                }
            }
        }
    }
    return rich > 0 ? 100.0 * static_cast<double>(covered) / static_cast<double>(rich)
                    : 0.0;
}

MetricsReport derive_indicators(double total_len, int covered_count, double cov_len,
                                double ratio_percent) {
    MetricsReport r;
    r.total_length = total_len;
    r.covered_ooi_count = covered_count;
    r.coverage_length = cov_len;
    r.coverage_ratio = ratio_percent;
    if (total_len > 0.0) r.ooi_density = covered_count / total_len;
    if (cov_len > 0.0) r.ooi_efficiency = covered_count / cov_len;
    return r;
}

MetricsReport report_for(const std::vector<TrajectoryLog>& trajs,
                         const Scenario& scenario, double radius, double resolution) {
    double total = 0.0;
    double cov = 0.0;
    for (const TrajectoryLog& t : trajs) {
        total += total_length(t);
        cov += coverage_length(t, scenario.oois, radius);
    }
    const int count = covered_oois_team(trajs, scenario.oois, radius);
    const double ratio = coverage_ratio(trajs, scenario, radius, resolution);
    return derive_indicators(total, count, cov, ratio);
}

}  // namespace reefcover::metrics
