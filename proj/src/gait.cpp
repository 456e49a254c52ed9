#include "reefcover/gait.hpp"

#include <cmath>

namespace reefcover::gait {

namespace {
using geometry::normalize_angle;
using geometry::Vec2;
}  // namespace

Amplitudes amplitudes(double delta, const GaitParams& params) {
    const double skew = params.curvature_gain * delta / params.delta_max;
    return {params.base_amplitude - skew, params.base_amplitude + skew};
}

GaitSequence generate_gait(double delta, double phi, const GaitParams& params) {
    const Amplitudes amp = amplitudes(delta, params);
    const int n = params.steps_per_cycle;
    GaitSequence seq;
    seq.steps.resize(static_cast<std::size_t>(n));
    const double hind = params.hind_scale * params.base_amplitude;
    const double lift = params.lift_scale * params.base_amplitude;
    for (int i = 0; i < n; ++i) {
        // phi scales the stroke phase velocity; phi = 0 keeps the neutral
        // posture for the whole cycle.
        const double phase = 2.0 * M_PI * phi * i / n;
        const double stroke = std::sin(phase);
        const double raise = lift * (1.0 - std::cos(phase)) / 2.0;
        JointVector& u = seq.steps[static_cast<std::size_t>(i)];
        u = {amp.left * stroke,  raise, 0.0,   // FL
             amp.right * stroke, raise, 0.0,   // FR
             hind * stroke,      raise, 0.0,   // HL
             hind * stroke,      raise, 0.0};  // HR
    }
    return seq;
}

CycleDisplacement cycle_displacement(double delta, double phi,
                                     const GaitParams& params) {
    const Amplitudes amp = amplitudes(delta, params);
    return {params.heading_gain * (amp.right - amp.left),
            params.distance_gain * phi * params.base_amplitude};
}

bool pose_is_free(const Pose& pose, const Scenario& scenario, double robot_radius) {
    return scenario.arena.contains(pose.position(), robot_radius) &&
           world::clearance(pose.position(), scenario) >= robot_radius;
}

StepOutcome apply_substep(const Pose& pose, int substep, double delta, double phi,
                          const GaitParams& params, const Scenario& scenario,
                          double robot_radius) {
    const CycleDisplacement disp = cycle_displacement(delta, phi, params);
    StepOutcome out{pose, false};
    if (substep == 0) out.pose.theta = normalize_angle(pose.theta + disp.d_theta);
    const double step = disp.d_forward / params.steps_per_cycle;
    if (step <= 0.0) return out;
    const Vec2 dir = geometry::unit(out.pose.theta);
    Pose candidate = out.pose;
    candidate.x += dir.x * step;
    candidate.y += dir.y * step;
    if (pose_is_free(candidate, scenario, robot_radius)) {
        out.pose = candidate;
    } else {
        out.truncated = true;
    }
    return out;
}

StepOutcome apply_cycle(const Pose& pose, double delta, double phi,
                        const GaitParams& params, const Scenario& scenario,
                        double robot_radius) {
    StepOutcome out{pose, false};
    for (int i = 0; i < params.steps_per_cycle; ++i) {
        const StepOutcome sub =
            apply_substep(out.pose, i, delta, phi, params, scenario, robot_radius);
        out.pose = sub.pose;
        out.truncated = out.truncated || sub.truncated;
    }
    return out;
}

}  // namespace reefcover::gait
