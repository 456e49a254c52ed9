#pragma once

#include <cstdint>
#include <vector>

#include "reefcover/gait.hpp"
#include "reefcover/rng.hpp"
#include "reefcover/world.hpp"

namespace reefcover::baselines {

using geometry::Vec2;
using world::Pose;
using world::Scenario;

struct BcdPlan {
    struct Lane {
        Vec2 start;
        Vec2 end;
    };
    std::vector<Lane> lanes;  // serpentine execution order
    double lane_spacing = 1.4;
    char sweep_axis = 'x';  // lanes run along this axis

    std::vector<Vec2> waypoints() const;
};

// Slab decomposition at obstacle vertices with parallel lanes per cell,
// clipped against obstacles (inflated by the robot radius) and ordered
// serpentine within each cell.
BcdPlan plan_bcd(const Scenario& scenario, double spacing, double robot_radius = 0.25);

struct BbWalk {
    Vec2 anchor_start;
    Vec2 anchor_end;
    double step_sigma = 0.3;
    std::uint64_t seed = 0;
    double length_budget = 0.0;
    int total_steps = 0;  // budget divided by the per-step length
    int steps_taken = 0;
};

// One discrete Brownian-bridge step: drift (anchor_end - pos) / remaining
// plus sigma-scaled Gaussian noise, reflected at the arena walls. The
// in-engine controller drives the plant toward these proposals.
Pose step_bb(BbWalk& walk, const Pose& pose, rng::Stream& stream,
             const world::Arena& arena, double margin);

// Inversion of the gait plant: the (delta, phi) pair that steers toward
// `target` from `pose` within one cycle's authority.
struct SteeringCommand {
    double delta = 0.0;
    double phi = 0.0;
    double heading_error = 0.0;
};
SteeringCommand steer_toward(const Pose& pose, Vec2 target,
                             const gait::GaitParams& params);

// Obstacle-aware transit route between two free points (A* over a coarse
// free-space grid, line-of-sight simplified). Falls back to the straight
// segment when no route exists. Excludes `from`, includes `to`.
std::vector<Vec2> route_between(const Scenario& scenario, Vec2 from, Vec2 to,
                                double robot_radius);

// Full executable waypoint list for a plan: lane endpoints joined by routed
// transit hops.
std::vector<Vec2> routed_waypoints(const BcdPlan& plan, const Scenario& scenario,
                                   Vec2 start, double robot_radius);

}  // namespace reefcover::baselines
