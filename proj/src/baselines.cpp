#include "reefcover/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace reefcover::baselines {

namespace {

constexpr double kMarchStep = 0.02;
constexpr double kMinLaneLength = 0.3;

struct Segment {
    double y = 0.0;
    double x0 = 0.0;
    double x1 = 0.0;
    int level = 0;  // lane index in y
};

bool vertical_connector_free(const Scenario& scenario, double x, double y0, double y1,
                             double robot_radius) {
    const int steps = std::max(2, static_cast<int>(std::ceil((y1 - y0) / 0.05)));
    for (int k = 0; k <= steps; ++k) {
        const double y = y0 + (y1 - y0) * k / steps;
        if (world::clearance({x, y}, scenario) < robot_radius) return false;
    }
    return true;
}

}  // namespace

std::vector<Vec2> BcdPlan::waypoints() const {
    std::vector<Vec2> pts;
    pts.reserve(lanes.size() * 2);
    for (const Lane& lane : lanes) {
        pts.push_back(lane.start);
        pts.push_back(lane.end);
    }
    return pts;
}

BcdPlan plan_bcd(const Scenario& scenario, double spacing, double robot_radius) {
    if (spacing <= 0.0) throw std::invalid_argument("lane spacing must be positive");
    const double w = scenario.arena.width;
    const double h = scenario.arena.height;
    const double margin = robot_radius;

    BcdPlan plan;
    plan.lane_spacing = spacing;
    plan.sweep_axis = 'x';

    // Free intervals along x for every global lane level.
    std::vector<Segment> segments;
    int level = 0;
    for (double y = spacing / 2.0; y < h - margin + 1e-9; y += spacing, ++level) {
        if (y < margin) continue;
        double start = -1.0;
        for (double x = margin; x <= w - margin + 1e-9; x += kMarchStep) {
            const bool free = world::clearance({x, y}, scenario) >= robot_radius;
            if (free && start < 0.0) start = x;
            if ((!free || x + kMarchStep > w - margin) && start >= 0.0) {
                const double end = free ? x : x - kMarchStep;
                // Conservative shrink keeps endpoints clear of obstacles.
                const double x0 = start + kMarchStep;
                const double x1 = end - kMarchStep;
                if (x1 - x0 >= kMinLaneLength) segments.push_back({y, x0, x1, level});
                start = -1.0;
            }
        }
    }
    if (segments.empty()) throw std::invalid_argument("no free space for BCD lanes");

    // Connected cells: segments on adjacent levels belong to the same cell
    // when their x-ranges overlap and the connector between them is free.
    std::vector<std::size_t> parent(segments.size());
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t a = 0; a < segments.size(); ++a) {
        for (std::size_t b = a + 1; b < segments.size(); ++b) {
            if (segments[b].level != segments[a].level + 1 &&
                segments[a].level != segments[b].level + 1)
                continue;
            const double lo = std::max(segments[a].x0, segments[b].x0);
            const double hi = std::min(segments[a].x1, segments[b].x1);
            if (hi - lo < kMinLaneLength) continue;
            const double xmid = (lo + hi) / 2.0;
            const double y0 = std::min(segments[a].y, segments[b].y);
            const double y1 = std::max(segments[a].y, segments[b].y);
            if (vertical_connector_free(scenario, xmid, y0, y1, robot_radius))
                parent[find(a)] = find(b);
        }
    }

    // Order cells by (lowest lane y, then x). Within a cell, sweep levels
    // bottom-up with alternating direction; fragments on one level are
    // traversed in the sweep direction so the path never zig-zags across
    // the arena.
    std::vector<std::size_t> order(segments.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> cell_min_y(segments.size(), 1e18);
    std::vector<double> cell_min_x(segments.size(), 1e18);
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const std::size_t root = find(k);
        cell_min_y[root] = std::min(cell_min_y[root], segments[k].y);
        cell_min_x[root] = std::min(cell_min_x[root], segments[k].x0);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const std::size_t ra = find(a);
        const std::size_t rb = find(b);
        if (ra != rb) {
            if (cell_min_y[ra] != cell_min_y[rb]) return cell_min_y[ra] < cell_min_y[rb];
            if (cell_min_x[ra] != cell_min_x[rb]) return cell_min_x[ra] < cell_min_x[rb];
            return ra < rb;
        }
        if (segments[a].level != segments[b].level)
            return segments[a].level < segments[b].level;
        return segments[a].x0 < segments[b].x0;
    });

    std::size_t current_cell = segments.size();
    int local_level = -1;
    int last_level = -1;
    std::vector<std::size_t> level_group;
    const auto flush_level = [&]() {
        if (level_group.empty()) return;
        const bool rightward = (local_level % 2 == 0);
        if (!rightward) std::reverse(level_group.begin(), level_group.end());
        for (const std::size_t k : level_group) {
            const Segment& seg = segments[k];
            if (rightward)
                plan.lanes.push_back({{seg.x0, seg.y}, {seg.x1, seg.y}});
            else
                plan.lanes.push_back({{seg.x1, seg.y}, {seg.x0, seg.y}});
        }
        level_group.clear();
    };
    for (const std::size_t k : order) {
        const std::size_t root = find(k);
        if (root != current_cell) {
            flush_level();
            current_cell = root;
            local_level = -1;
            last_level = -1;
        }
        if (segments[k].level != last_level) {
            flush_level();
            last_level = segments[k].level;
            ++local_level;
        }
        level_group.push_back(k);
    }
    flush_level();
    return plan;
}

Pose step_bb(BbWalk& walk, const Pose& pose, rng::Stream& stream,
             const world::Arena& arena, double margin) {
    const int remaining = std::max(1, walk.total_steps - walk.steps_taken);
    const Vec2 pos = pose.position();
    const Vec2 drift = (walk.anchor_end - pos) * (1.0 / remaining);
    const Vec2 noise{walk.step_sigma * stream.gaussian(),
                     walk.step_sigma * stream.gaussian()};
    Vec2 next = pos + drift + noise;

    // Reflect at the arena walls.
    for (int pass = 0; pass < 8; ++pass) {
        bool moved = false;
        if (next.x < margin) { next.x = 2.0 * margin - next.x; moved = true; }
        if (next.x > arena.width - margin) {
            next.x = 2.0 * (arena.width - margin) - next.x;
            moved = true;
        }
        if (next.y < margin) { next.y = 2.0 * margin - next.y; moved = true; }
        if (next.y > arena.height - margin) {
            next.y = 2.0 * (arena.height - margin) - next.y;
            moved = true;
        }
        if (!moved) break;
    }
    next.x = std::clamp(next.x, margin, arena.width - margin);
    next.y = std::clamp(next.y, margin, arena.height - margin);

    ++walk.steps_taken;
    Pose out = pose;
    out.t = pose.t + 1;
    out.x = next.x;
    out.y = next.y;
    const Vec2 disp = next - pos;
    if (disp.norm() > 1e-12) out.theta = disp.angle();
    return out;
}

namespace {

constexpr double kRouteRes = 0.25;
// Routed hops keep extra clearance so the plant's curved approach paths do
// not scrape the corners the straight route only just misses.
constexpr double kRouteSlack = 0.15;

bool route_point_free(const Scenario& scenario, Vec2 p, double robot_radius) {
    const double margin = robot_radius + kRouteSlack;
    return scenario.arena.contains(p, robot_radius) &&
           world::clearance(p, scenario) >= margin;
}

bool route_segment_free(const Scenario& scenario, Vec2 a, Vec2 b,
                        double robot_radius) {
    const double len = (b - a).norm();
    const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.1)));
    for (int k = 0; k <= steps; ++k) {
        const Vec2 p = a + (b - a) * (static_cast<double>(k) / steps);
        if (!route_point_free(scenario, p, robot_radius)) return false;
    }
    return true;
}

}  // namespace

std::vector<Vec2> route_between(const Scenario& scenario, Vec2 from, Vec2 to,
                                double robot_radius) {
    if (route_segment_free(scenario, from, to, robot_radius)) return {to};

    const int nx = static_cast<int>(std::ceil(scenario.arena.width / kRouteRes));
    const int ny = static_cast<int>(std::ceil(scenario.arena.height / kRouteRes));
    const auto center = [&](int i, int j) {
        return Vec2{(i + 0.5) * kRouteRes, (j + 0.5) * kRouteRes};
    };
    std::vector<char> free_cell(static_cast<std::size_t>(nx * ny));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            free_cell[static_cast<std::size_t>(j * nx + i)] =
                route_point_free(scenario, center(i, j), robot_radius) ? 1 : 0;

    const auto snap = [&](Vec2 p) -> int {
        int bi = std::clamp(static_cast<int>(p.x / kRouteRes), 0, nx - 1);
        int bj = std::clamp(static_cast<int>(p.y / kRouteRes), 0, ny - 1);
        for (int ring = 0; ring < 6; ++ring)
            for (int dj = -ring; dj <= ring; ++dj)
                for (int di = -ring; di <= ring; ++di) {
                    const int i = bi + di;
                    const int j = bj + dj;
                    if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
                    if (free_cell[static_cast<std::size_t>(j * nx + i)])
                        return j * nx + i;
                }
        return -1;
    };
    const int start = snap(from);
    const int goal = snap(to);
    if (start < 0 || goal < 0) return {to};

    // Plain A*, deterministic tie-break on (f, index).
    const double inf = 1e18;
    std::vector<double> g(static_cast<std::size_t>(nx * ny), inf);
    std::vector<int> came(static_cast<std::size_t>(nx * ny), -1);
    std::vector<char> closed(static_cast<std::size_t>(nx * ny), 0);
    const auto h = [&](int node) {
        const Vec2 c = center(node % nx, node / nx);
        return (center(goal % nx, goal / nx) - c).norm();
    };
    using Entry = std::pair<double, int>;
    std::vector<Entry> open = {{h(start), start}};
    g[static_cast<std::size_t>(start)] = 0.0;
    while (!open.empty()) {
        const auto it = std::min_element(open.begin(), open.end());
        const int node = it->second;
        open.erase(it);
        if (closed[static_cast<std::size_t>(node)]) continue;
        closed[static_cast<std::size_t>(node)] = 1;
        if (node == goal) break;
        const int ci = node % nx;
        const int cj = node / nx;
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0) continue;
                const int i = ci + di;
                const int j = cj + dj;
                if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
                const int next = j * nx + i;
                if (!free_cell[static_cast<std::size_t>(next)]) continue;
                if (di != 0 && dj != 0) {  // no corner cutting
                    if (!free_cell[static_cast<std::size_t>(cj * nx + i)] ||
                        !free_cell[static_cast<std::size_t>(j * nx + ci)])
                        continue;
                }
                const double step = (di != 0 && dj != 0) ? kRouteRes * M_SQRT2 : kRouteRes;
                if (g[static_cast<std::size_t>(node)] + step <
                    g[static_cast<std::size_t>(next)] - 1e-12) {
                    g[static_cast<std::size_t>(next)] =
                        g[static_cast<std::size_t>(node)] + step;
                    came[static_cast<std::size_t>(next)] = node;
                    open.emplace_back(g[static_cast<std::size_t>(next)] + h(next), next);
                }
            }
        }
    }
    if (!closed[static_cast<std::size_t>(goal)]) return {to};

    std::vector<Vec2> raw;
    for (int node = goal; node >= 0; node = came[static_cast<std::size_t>(node)])
        raw.push_back(center(node % nx, node / nx));
    std::reverse(raw.begin(), raw.end());
    raw.push_back(to);

    // Greedy line-of-sight shortcutting.
    std::vector<Vec2> out;
    Vec2 cursor = from;
    std::size_t k = 0;
    while (k + 1 < raw.size()) {
        std::size_t best = k;
        for (std::size_t m = raw.size() - 1; m > k; --m) {
            if (route_segment_free(scenario, cursor, raw[m], robot_radius)) {
                best = m;
                break;
            }
        }
        if (best == k) best = k + 1;  // no shortcut; take the next grid step
        out.push_back(raw[best]);
        cursor = raw[best];
        k = best;
    }
    if (out.empty() || (out.back() - to).norm() > 1e-9) out.push_back(to);
    return out;
}

std::vector<Vec2> routed_waypoints(const BcdPlan& plan, const Scenario& scenario,
                                   Vec2 start, double robot_radius) {
    std::vector<Vec2> out;
    Vec2 cursor = start;
    for (const BcdPlan::Lane& lane : plan.lanes) {
        for (const Vec2 hop : route_between(scenario, cursor, lane.start, robot_radius))
            out.push_back(hop);
        out.push_back(lane.end);
        cursor = lane.end;
    }
    return out;
}

SteeringCommand steer_toward(const Pose& pose, Vec2 target,
                             const gait::GaitParams& params) {
    const Vec2 d = target - pose.position();
    const double dist = d.norm();
    SteeringCommand cmd;
    if (dist < 1e-9) return cmd;
    const double error = geometry::normalize_angle(d.angle() - pose.theta);
    cmd.heading_error = error;
    const double max_turn = params.heading_gain * 2.0 * params.curvature_gain;
    cmd.delta = std::clamp(error / max_turn, -1.0, 1.0) * params.delta_max;
    double phi = std::clamp(1.0 - std::abs(error) / 0.5, 0.0, 1.0);
    const double cycle_dist = params.distance_gain * params.base_amplitude;
    phi = std::min(phi, dist / cycle_dist);
    cmd.phi = std::clamp(phi, 0.0, 1.0);
    return cmd;
}

}  // namespace reefcover::baselines
