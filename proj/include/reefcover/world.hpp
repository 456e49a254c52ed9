#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "reefcover/geometry.hpp"

namespace reefcover::world {

using geometry::Polygon;
using geometry::Vec2;

struct Arena {
    double width = 12.0;
    double height = 8.0;

    bool contains(Vec2 p, double margin = 0.0) const {
        return p.x >= margin && p.x <= width - margin && p.y >= margin &&
               p.y <= height - margin;
    }
};

struct Obstacle {
    Polygon shape;
};

struct Ooi {
    int id = 0;
    Vec2 position;
};

// Planar pose; z is carried for log compatibility but fixed at 0.
struct Pose {
    std::int64_t t = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double theta = 0.0;

    Vec2 position() const { return {x, y}; }
};

struct ScenarioParams {
    Arena arena{};
    int ooi_count = -1;        // -1 selects the per-scenario default
    double gap_width = 2.6;    // disconnected_paths inter-cluster gap (m)
    double jitter = 0.15;      // obstacle placement jitter (m)
    double ooi_jitter = 0.32;  // OOI scatter around layout skeletons (m)
    double robot_radius = 0.25;
};

struct Scenario {
    std::string name;
    Arena arena;
    std::vector<Obstacle> obstacles;
    std::vector<Ooi> oois;
    std::vector<Pose> spawn_poses;
    std::uint64_t seed = 0;
};

// Procedural layouts for the three named scenarios. Deterministic in
// (name, params, seed). Throws std::invalid_argument on unknown names or
// params that cannot produce a valid layout.
Scenario build_scenario(const std::string& name, const ScenarioParams& params,
                        std::uint64_t seed);

// Throws std::invalid_argument when an invariant is broken.
void validate_scenario(const Scenario& s, double robot_radius);

// Signed distance to the nearest obstacle boundary; negative inside an
// obstacle. Arena walls are not obstacles here.
double clearance(Vec2 p, const Scenario& s);

struct CellIndex {
    int i = 0;
    int j = 0;
    auto operator<=>(const CellIndex&) const = default;
};

using CellSet = std::set<CellIndex>;

// Explored-cell memory: cell (floor(x/r), floor(y/r)) per visited pose.
struct OccupancyGrid {
    double resolution = 0.5;
    std::map<CellIndex, int> visit_counts;

    static CellIndex cell_of(double x, double y, double resolution);

    void update(const Pose& pose);  // throws on non-finite coordinates
    bool visited(CellIndex c) const { return visit_counts.count(c) > 0; }
    std::size_t cell_count() const { return visit_counts.size(); }
    CellSet cells() const;
};

OccupancyGrid update_grid(OccupancyGrid grid, const Pose& pose);

// Single-linkage cluster count at the given distance threshold.
int count_clusters(const std::vector<Ooi>& oois, double threshold);

// Human-readable scenario file (JSON), round-trippable with build_scenario
// output. Schema in docs/file-formats.md.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace reefcover::world
