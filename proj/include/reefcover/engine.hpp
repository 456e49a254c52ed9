#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reefcover/baselines.hpp"
#include "reefcover/comms.hpp"
#include "reefcover/fuzzy.hpp"
#include "reefcover/gait.hpp"
#include "reefcover/metrics.hpp"
#include "reefcover/semantics.hpp"
#include "reefcover/sensing.hpp"
#include "reefcover/world.hpp"

namespace reefcover::engine {

enum class ControllerKind { semantic_fuzzy, bcd, bb };

std::string_view to_string(ControllerKind kind);
ControllerKind controller_from_string(std::string_view name);

struct SimConfig {
    std::string scenario_name = "grid_world";
    world::ScenarioParams scenario_params;
    ControllerKind controller = ControllerKind::semantic_fuzzy;
    int n_robots = 2;
    std::uint64_t seed = 1;
    int max_steps = 3600;
    double timestep_ms = 256.0;
    int query_every = 4;  // semantic queries every this many gait cycles

    double robot_radius = 0.25;
    double grid_resolution = 0.5;

    sensing::SensorConfig sensor;
    gait::GaitParams gait_params;

    bool comms_enabled = true;
    comms::ChannelModel channel;
    int claim_expire_rounds = 3;
    double claim_penalty = 3.0;

    double coverage_radius = 0.7;
    double metrics_resolution = 0.25;

    std::string llm_endpoint;  // empty selects the heuristic backend
    semantics::RemoteConfig remote;
    semantics::BackendTuning tuning;
    semantics::GoalSpec goal;

    double bcd_spacing = 1.4;
    double bb_step_sigma = 0.3;
    double bb_length_budget = 0.0;  // 0 derives it from max_steps
};

struct RobotRuntime {
    int id = 0;
    world::Pose pose;
    world::OccupancyGrid grid;
    int gait_phase = 0;
    gait::GaitSequence current_gait;
    std::optional<labels::FuzzyLabelSet> last_labels;
    std::optional<semantics::SemanticDescriptors> last_descriptors;
    comms::PolicyAdjustment policy_adj;
    bool recovery_active = false;

    double delta = 0.0;
    double phi = 0.0;

    comms::SharedSemanticMap shared_map;
    std::optional<comms::Compass> own_claim;
    std::int64_t own_claim_round = -1;

    // bcd state
    std::vector<geometry::Vec2> waypoints;  // lane endpoints in sweep order
    std::size_t waypoint_index = 0;
    std::vector<geometry::Vec2> hop_queue;  // routed hops toward the waypoint
    std::size_t hop_index = 0;
    bool rerouted = false;
    int stall_cycles = 0;  // cycles without progress toward the current hop
    double last_waypoint_dist = 1e18;
    int cycle_truncations = 0;

    // bb state
    baselines::BbWalk walk;
};

struct RunResult {
    std::vector<metrics::TrajectoryLog> logs;  // one per robot
    metrics::MetricsReport team;
    std::vector<metrics::MetricsReport> per_robot;
    std::string event_log;
    int llm_fallbacks = 0;
    std::vector<std::int64_t> query_counts;
    std::int64_t truncation_count = 0;
};

// Emits the rotate-in-place label set used while no OOI is visible.
labels::FuzzyLabelSet recovery_controller(const RobotRuntime& runtime);

RunResult run(const SimConfig& config, const world::Scenario& scenario);

}  // namespace reefcover::engine
