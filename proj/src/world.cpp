#include "reefcover/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "reefcover/rng.hpp"

namespace reefcover::world {

namespace {

using geometry::normalize_angle;

double obstacle_distance(Vec2 p, const std::vector<Obstacle>& obstacles) {
    double best = geometry::kInf;
    for (const Obstacle& ob : obstacles)
        best = std::min(best, ob.shape.signed_distance(p));
    return best;
}

struct SkeletonSegment {
    Vec2 a, b;
    double length() const { return (b - a).norm(); }
};

// Scatter `count` OOIs along a skeleton of segments, jittered sideways.
std::vector<Vec2> scatter_along(const std::vector<SkeletonSegment>& skeleton,
                                int count, double jitter, rng::Stream& rs) {
    double total = 0.0;
    for (const auto& seg : skeleton) total += seg.length();
    std::vector<Vec2> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        // Stratified arc-length positions keep the density even across seeds.
        double s = (k + 0.5) / count * total;
        Vec2 p = skeleton.back().b;
        Vec2 dir{1.0, 0.0};
        for (const auto& seg : skeleton) {
            const double len = seg.length();
            if (s <= len || &seg == &skeleton.back()) {
                const double t = len > 0.0 ? std::clamp(s / len, 0.0, 1.0) : 0.0;
                p = seg.a + (seg.b - seg.a) * t;
                dir = len > 0.0 ? (seg.b - seg.a) * (1.0 / len) : dir;
                break;
            }
            s -= len;
        }
        const Vec2 normal{-dir.y, dir.x};
        const double off = rs.gaussian() * jitter;
        const double along = rs.gaussian() * jitter * 0.6;
        points.push_back(p + normal * off + dir * along);
    }
    return points;
}

void clamp_into_arena(Vec2& p, const Arena& arena, double margin) {
    p.x = std::clamp(p.x, margin, arena.width - margin);
    p.y = std::clamp(p.y, margin, arena.height - margin);
}

struct ObstacleSpec {
    Vec2 center;
    int sides;      // 0 = rectangle
    double size_a;  // radius, or rectangle width
    double size_b;  // rectangle height
    double rotation;
};

Polygon realize(const ObstacleSpec& spec, double scale) {
    if (spec.sides == 0)
        return geometry::make_rectangle(spec.center, spec.size_a * scale,
                                        spec.size_b * scale, spec.rotation);
    return geometry::make_regular_polygon(spec.center, spec.size_a * scale,
                                          spec.sides, spec.rotation);
}

// Place obstacles at jittered nominal anchors, shrinking deterministically
// when a candidate crowds the OOIs, spawns, or another obstacle.
std::vector<Obstacle> place_obstacles(const std::vector<ObstacleSpec>& specs,
                                      const Arena& arena,
                                      const std::vector<Pose>& spawns,
                                      double jitter, rng::Stream& rs) {
    std::vector<Obstacle> placed;
    for (ObstacleSpec spec : specs) {
        spec.center.x += rs.uniform(-jitter, jitter);
        spec.center.y += rs.uniform(-jitter, jitter);
        spec.rotation += rs.uniform(-0.3, 0.3);
        clamp_into_arena(spec.center, arena, 0.9);

        Polygon poly;
        for (double scale : {1.0, 0.85, 0.7}) {
            poly = realize(spec, scale);
            bool ok = true;
            for (const Vec2& v : poly.vertices)
                if (!arena.contains(v, 0.12)) ok = false;
            for (const Pose& sp : spawns)
                if (ok && poly.signed_distance(sp.position()) < 0.75) ok = false;
            for (const Obstacle& other : placed) {
                if (!ok) break;
                for (const Vec2& v : poly.vertices)
                    if (other.shape.signed_distance(v) < 0.35) ok = false;
                for (const Vec2& v : other.shape.vertices)
                    if (poly.signed_distance(v) < 0.35) ok = false;
            }
            if (ok) break;
            poly = realize(spec, 0.6);  // last resort, small enough everywhere
        }
        placed.push_back(Obstacle{poly});
    }
    return placed;
}

// OOIs may not sit inside or hug an obstacle; push them radially out.
void repair_oois(std::vector<Vec2>& points, const std::vector<Obstacle>& obstacles,
                 const Arena& arena) {
    constexpr double kMinGap = 0.35;
    for (Vec2& p : points) {
        clamp_into_arena(p, arena, 0.4);
        for (int pass = 0; pass < 4; ++pass) {
            bool moved = false;
            for (const Obstacle& ob : obstacles) {
                if (ob.shape.signed_distance(p) < kMinGap) {
                    Vec2 away = p - ob.shape.centroid();
                    const double n = away.norm();
                    away = n > 1e-9 ? away * (1.0 / n) : Vec2{1.0, 0.0};
                    p = p + away * 0.3;
                    clamp_into_arena(p, arena, 0.4);
                    moved = true;
                }
            }
            if (!moved) break;
        }
    }
}

Scenario assemble(const std::string& name, const ScenarioParams& params,
                  std::uint64_t seed, const std::vector<ObstacleSpec>& specs,
                  const std::vector<SkeletonSegment>& skeleton, int default_oois,
                  const std::vector<Pose>& spawns, rng::Stream& rs) {
    Scenario s;
    s.name = name;
    s.arena = params.arena;
    s.seed = seed;
    s.spawn_poses = spawns;
    s.obstacles = place_obstacles(specs, s.arena, spawns, params.jitter, rs);

    const int count = params.ooi_count > 0 ? params.ooi_count : default_oois;
    std::vector<Vec2> points = scatter_along(skeleton, count, params.ooi_jitter, rs);
    repair_oois(points, s.obstacles, s.arena);
    s.oois.reserve(points.size());
    for (std::size_t k = 0; k < points.size(); ++k)
        s.oois.push_back(Ooi{static_cast<int>(k), points[k]});
    return s;
}

Scenario build_grid_world(const ScenarioParams& params, std::uint64_t seed,
                          rng::Stream& rs) {
    // Interconnected patches: a diagonal spine with three branches and a
    // top link closing a loop.
    const std::vector<SkeletonSegment> skeleton = {
        {{1.2, 1.6}, {10.8, 6.4}},   // spine
        {{3.6, 2.8}, {2.2, 6.6}},    // branch up-left
        {{6.0, 4.0}, {8.4, 1.2}},    // branch down-right
        {{8.4, 5.2}, {5.4, 7.0}},    // branch up-left
        {{2.2, 6.6}, {5.4, 7.0}},    // top link
    };
    const std::vector<ObstacleSpec> specs = {
        {{1.8, 4.6}, 0, 1.1, 0.8, 0.2},
        {{9.6, 2.6}, 5, 0.55, 0.0, 0.4},
        {{10.9, 1.1}, 4, 0.6, 0.0, 0.5},
        {{4.9, 5.4}, 5, 0.6, 0.0, 0.9},
        {{2.6, 1.0}, 3, 0.55, 0.0, -0.3},
    };
    const std::vector<Pose> spawns = {
        {0, 1.0, 1.0, 0.0, 1.25},
        {0, 11.2, 7.0, 0.0, -2.16},
        {0, 1.2, 7.2, 0.0, -0.54},
    };
    return assemble("grid_world", params, seed, specs, skeleton, 72, spawns, rs);
}

Scenario build_e_shape(const ScenarioParams& params, std::uint64_t seed,
                       rng::Stream& rs) {
    // Wide C-shaped band opening toward +x, plus a narrow central patch.
    std::vector<SkeletonSegment> skeleton;
    const Vec2 center{6.0, 4.0};
    const double radius = 2.8;
    const double start = 50.0 * M_PI / 180.0;
    const double end = 310.0 * M_PI / 180.0;
    const int arcs = 14;
    for (int k = 0; k < arcs; ++k) {
        const double a0 = start + (end - start) * k / arcs;
        const double a1 = start + (end - start) * (k + 1) / arcs;
        skeleton.push_back({center + geometry::unit(a0) * radius,
                            center + geometry::unit(a1) * radius});
    }
    skeleton.push_back({{5.5, 4.0}, {6.6, 4.0}});  // central patch
    const std::vector<ObstacleSpec> specs = {
        {{1.5, 1.3}, 0, 1.0, 0.7, 0.3},
        {{1.5, 6.7}, 4, 0.55, 0.0, 0.2},
        {{10.5, 1.3}, 5, 0.55, 0.0, 0.0},
        {{10.5, 6.7}, 0, 1.0, 0.7, -0.4},
        {{7.6, 5.1}, 3, 0.55, 0.0, 0.5},
        {{7.6, 2.9}, 4, 0.5, 0.0, 0.7},
        {{10.9, 4.0}, 3, 0.6, 0.0, -0.2},
    };
    const std::vector<Pose> spawns = {
        {0, 9.4, 6.3, 0.0, -3.05},
        {0, 9.4, 1.7, 0.0, 3.04},
        {0, 2.0, 4.0, 0.0, 0.0},
    };
    return assemble("e_shape", params, seed, specs, skeleton, 62, spawns, rs);
}

Scenario build_disconnected(const ScenarioParams& params, std::uint64_t seed,
                            rng::Stream& rs) {
    const double gap = params.gap_width;
    Scenario s;
    s.name = "disconnected_paths";
    s.arena = params.arena;
    s.seed = seed;
    s.spawn_poses = {
        {0, 1.0, 2.0, 0.0, 1.10},
        {0, 11.0, 5.9, 0.0, -2.40},
        {0, 1.0, 6.0, 0.0, -0.90},
    };
    const std::vector<ObstacleSpec> specs = {
        {{1.2, 0.9}, 0, 0.9, 0.6, 0.1},
        {{1.0, 7.1}, 4, 0.5, 0.0, 0.3},
        {{10.9, 1.0}, 3, 0.55, 0.0, 0.6},
        {{11.0, 7.1}, 4, 0.5, 0.0, -0.2},
        {{5.3, 1.6}, 0, 1.0, 0.7, 0.2},
        {{5.3, 6.4}, 5, 0.55, 0.0, 0.4},
        {{6.6, 1.2}, 3, 0.55, 0.0, 0.9},
    };
    s.obstacles = place_obstacles(specs, s.arena, s.spawn_poses, params.jitter, rs);

    const int count = params.ooi_count > 0 ? params.ooi_count : 56;
    const int count_a = count / 2;
    const int count_b = count - count_a;
    // Two patchy clusters (short strokes, reef-like), x-extents clamped so
    // the single-linkage gap is at least `gap` by construction.
    const double a_max_x = 3.95;
    const double b_min_x = a_max_x + gap + 0.05;
    const std::vector<SkeletonSegment> skeleton_a = {
        {{1.2, 1.6}, {3.0, 2.6}},
        {{3.0, 2.6}, {2.2, 4.4}},
        {{2.2, 4.4}, {3.4, 6.2}},
        {{1.0, 5.4}, {2.2, 4.4}},
    };
    const std::vector<SkeletonSegment> skeleton_b = {
        {{8.6, 1.8}, {10.6, 2.8}},
        {{10.6, 2.8}, {9.6, 4.6}},
        {{9.6, 4.6}, {11.0, 6.2}},
        {{9.6, 4.6}, {8.2, 6.0}},
    };
    std::vector<Vec2> points = scatter_along(skeleton_a, count_a, params.ooi_jitter, rs);
    {
        auto more = scatter_along(skeleton_b, count_b, params.ooi_jitter, rs);
        points.insert(points.end(), more.begin(), more.end());
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
        clamp_into_arena(points[k], s.arena, 0.4);
        if (k < static_cast<std::size_t>(count_a))
            points[k].x = std::min(points[k].x, a_max_x);
        else
            points[k].x = std::max(points[k].x, b_min_x);
    }
    repair_oois(points, s.obstacles, s.arena);
    // Repair may push a point across the gap boundary; re-clamp x.
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (k < static_cast<std::size_t>(count_a))
            points[k].x = std::min(points[k].x, a_max_x);
        else
            points[k].x = std::max(points[k].x, b_min_x);
    }
    for (std::size_t k = 0; k < points.size(); ++k)
        s.oois.push_back(Ooi{static_cast<int>(k), points[k]});

    if (count_clusters(s.oois, gap) < 2)
        throw std::invalid_argument("disconnected_paths: gap constraint failed");
    return s;
}

}  // namespace

Scenario build_scenario(const std::string& name, const ScenarioParams& params,
                        std::uint64_t seed) {
    if (params.arena.width <= 0.0 || params.arena.height <= 0.0)
        throw std::invalid_argument("arena dimensions must be positive");
    rng::Stream rs(seed, "scenario");
    Scenario s;
    if (name == "grid_world") {
        s = build_grid_world(params, seed, rs);
    } else if (name == "e_shape") {
        s = build_e_shape(params, seed, rs);
    } else if (name == "disconnected_paths") {
        s = build_disconnected(params, seed, rs);
    } else {
        throw std::invalid_argument("unknown scenario name: " + name);
    }
    validate_scenario(s, params.robot_radius);
    return s;
}

void validate_scenario(const Scenario& s, double robot_radius) {
    if (s.arena.width <= 0.0 || s.arena.height <= 0.0)
        throw std::invalid_argument("arena dimensions must be positive");
    if (s.oois.empty()) throw std::invalid_argument("scenario has no OOIs");
    for (const Obstacle& ob : s.obstacles) {
        if (ob.shape.vertices.size() < 3)
            throw std::invalid_argument("obstacle with fewer than 3 vertices");
        if (!ob.shape.is_simple())
            throw std::invalid_argument("self-intersecting obstacle polygon");
        for (const Vec2& v : ob.shape.vertices)
            if (!s.arena.contains(v))
                throw std::invalid_argument("obstacle outside arena");
    }
    for (const Ooi& ooi : s.oois) {
        if (!s.arena.contains(ooi.position))
            throw std::invalid_argument("OOI outside arena");
        for (const Obstacle& ob : s.obstacles)
            if (ob.shape.contains(ooi.position))
                throw std::invalid_argument("OOI inside an obstacle");
    }
    for (const Pose& sp : s.spawn_poses) {
        if (!s.arena.contains(sp.position(), robot_radius))
            throw std::invalid_argument("spawn pose outside arena");
        if (clearance(sp.position(), s) < robot_radius)
            throw std::invalid_argument("spawn pose collides with an obstacle");
    }
}

double clearance(Vec2 p, const Scenario& s) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("non-finite point");
    return obstacle_distance(p, s.obstacles);
}

CellIndex OccupancyGrid::cell_of(double x, double y, double resolution) {
    return {static_cast<int>(std::floor(x / resolution)),
            static_cast<int>(std::floor(y / resolution))};
}

void OccupancyGrid::update(const Pose& pose) {
    if (!std::isfinite(pose.x) || !std::isfinite(pose.y))
        throw std::invalid_argument("non-finite pose coordinates");
    ++visit_counts[cell_of(pose.x, pose.y, resolution)];
}

CellSet OccupancyGrid::cells() const {
    CellSet out;
    for (const auto& [c, n] : visit_counts) out.insert(c);
    return out;
}

OccupancyGrid update_grid(OccupancyGrid grid, const Pose& pose) {
    grid.update(pose);
    return grid;
}

int count_clusters(const std::vector<Ooi>& oois, double threshold) {
    const std::size_t n = oois.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    const auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if ((oois[i].position - oois[j].position).norm() <= threshold)
                parent[find(i)] = find(j);
    int count = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (find(i) == i) ++count;
    return count;
}

std::string scenario_to_json(const Scenario& s) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["arena"] = {{"width", s.arena.width}, {"height", s.arena.height}};
    j["obstacles"] = nlohmann::ordered_json::array();
    for (const Obstacle& ob : s.obstacles) {
        nlohmann::ordered_json verts = nlohmann::ordered_json::array();
        for (const Vec2& v : ob.shape.vertices) verts.push_back({v.x, v.y});
        j["obstacles"].push_back({{"vertices", verts}});
    }
    j["oois"] = nlohmann::ordered_json::array();
    for (const Ooi& o : s.oois)
        j["oois"].push_back({{"id", o.id}, {"x", o.position.x}, {"y", o.position.y}});
    j["spawn_poses"] = nlohmann::ordered_json::array();
    for (const Pose& p : s.spawn_poses)
        j["spawn_poses"].push_back({{"x", p.x}, {"y", p.y}, {"theta", p.theta}});
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.seed = j.value("seed", 0ULL);
    s.arena.width = j.at("arena").at("width").get<double>();
    s.arena.height = j.at("arena").at("height").get<double>();
    for (const auto& ob : j.at("obstacles")) {
        Obstacle o;
        for (const auto& v : ob.at("vertices"))
            o.shape.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        s.obstacles.push_back(std::move(o));
    }
    for (const auto& o : j.at("oois"))
        s.oois.push_back(Ooi{o.at("id").get<int>(),
                             {o.at("x").get<double>(), o.at("y").get<double>()}});
    for (const auto& p : j.at("spawn_poses")) {
        Pose sp;
        sp.x = p.at("x").get<double>();
        sp.y = p.at("y").get<double>();
        sp.theta = p.at("theta").get<double>();
        s.spawn_poses.push_back(sp);
    }
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << scenario_to_json(s) << "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read scenario file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return scenario_from_json(buffer.str());
}

}  // namespace reefcover::world
