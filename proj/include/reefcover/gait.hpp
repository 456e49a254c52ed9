#pragma once

#include <array>
#include <vector>

#include "reefcover/world.hpp"

namespace reefcover::gait {

using world::Pose;
using world::Scenario;

struct GaitParams {
    double base_amplitude = 0.5;   // A0, radians
    double curvature_gain = 0.2;   // kappa; must stay below base_amplitude
    double delta_max = 50.0;
    int steps_per_cycle = 16;      // N
    double heading_gain = 1.0;     // rad per unit amplitude difference
    double distance_gain = 0.4;    // m per unit phi * A0
    double hind_scale = 0.5;       // hindlimb stroke relative to A0
    double lift_scale = 0.2;       // lift DOF relative to A0
};

struct Amplitudes {
    double left = 0.0;
    double right = 0.0;
};

// Left/right foreleg amplitude asymmetry from the steering adjustment.
Amplitudes amplitudes(double delta, const GaitParams& params);

// One 12-dim command vector per step; limb-major order FL, FR, HL, HR with
// DOFs (stroke, lift, twist) per limb.
using JointVector = std::array<double, 12>;

struct GaitSequence {
    std::vector<JointVector> steps;
};

GaitSequence generate_gait(double delta, double phi, const GaitParams& params);

struct CycleDisplacement {
    double d_theta = 0.0;
    double d_forward = 0.0;
};

CycleDisplacement cycle_displacement(double delta, double phi, const GaitParams& params);

struct StepOutcome {
    Pose pose;
    bool truncated = false;
};

// Planar reduction of one full gait cycle: heading updated first, then the
// forward displacement applied in N sub-increments with collision checking;
// blocked motion truncates at the last collision-free sub-step.
StepOutcome apply_cycle(const Pose& pose, double delta, double phi,
                        const GaitParams& params, const Scenario& scenario,
                        double robot_radius);

// One sub-increment (1/N of the cycle); the heading change applies entirely
// at substep 0 so that N substeps compose to apply_cycle exactly.
StepOutcome apply_substep(const Pose& pose, int substep, double delta, double phi,
                          const GaitParams& params, const Scenario& scenario,
                          double robot_radius);

bool pose_is_free(const Pose& pose, const Scenario& scenario, double robot_radius);

}  // namespace reefcover::gait
