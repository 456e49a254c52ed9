#include "reefcover/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "reefcover/rng.hpp"

namespace reefcover::engine {

using geometry::Vec2;
using labels::FuzzyLabelSet;
using world::Pose;
using world::Scenario;

std::string_view to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::semantic_fuzzy: return "semantic-fuzzy";
        case ControllerKind::bcd: return "bcd";
        case ControllerKind::bb: return "bb";
    }
    return "?";
}

ControllerKind controller_from_string(std::string_view name) {
    if (name == "semantic-fuzzy" || name == "semantic_fuzzy")
        return ControllerKind::semantic_fuzzy;
    if (name == "bcd") return ControllerKind::bcd;
    if (name == "bb") return ControllerKind::bb;
    throw std::invalid_argument("unknown controller: " + std::string(name));
}

labels::FuzzyLabelSet recovery_controller(const RobotRuntime& runtime) {
    (void)runtime;
    return semantics::recovery_labels();
}

namespace {

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

class EventLog {
public:
    explicit EventLog(std::vector<metrics::TrajectoryLog>* logs) : logs_(logs) {}

    void global(const std::string& line) { text_ += line + "\n"; }
    void robot(int id, const std::string& line) {
        text_ += line + "\n";
        (*logs_)[static_cast<std::size_t>(id)].events.push_back(line);
    }
    std::string take() { return std::move(text_); }

private:
    std::string text_;
    std::vector<metrics::TrajectoryLog>* logs_;
};

// Body-frame forward sectors mapped onto arena-frame compass claims plus a
// short-range separation push away from the last known peer positions.
std::array<double, 3> body_bias(const comms::PolicyAdjustment& adj,
                                const Pose& pose, double fov,
                                double proximity_penalty, double proximity_radius) {
    std::array<double, 3> bias{0.0, 0.0, 0.0};
    const double width = fov / 3.0;
    for (int s = 0; s < 3; ++s) {
        const comms::Compass c =
            comms::compass_of_angle(pose.theta + (s - 1) * width);
        if (const auto it = adj.sector_bias.find(c); it != adj.sector_bias.end())
            bias[static_cast<std::size_t>(s)] = it->second;
    }
    for (const auto& [peer_id, fix] : adj.peer_positions) {
        (void)peer_id;
        const Vec2 d = Vec2{fix.x, fix.y} - pose.position();
        const double dist = d.norm();
        if (dist >= proximity_radius || dist < 1e-9) continue;
        const double bearing = geometry::normalize_angle(d.angle() - pose.theta);
        if (std::abs(bearing) > fov / 2.0) continue;
        const int s = sensing::classify_bearing(bearing, fov);
        bias[static_cast<std::size_t>(s)] +=
            proximity_penalty * (1.0 - dist / proximity_radius);
    }
    return bias;
}

std::string bias_string(const comms::PolicyAdjustment& adj) {
    std::string out;
    for (const comms::Compass c : {comms::Compass::north, comms::Compass::east,
                                   comms::Compass::south, comms::Compass::west}) {
        if (!out.empty()) out += ",";
        const auto it = adj.sector_bias.find(c);
        out += format("%s:%.2f", std::string(comms::to_string(c)).c_str(),
                      it == adj.sector_bias.end() ? 0.0 : it->second);
    }
    return out;
}

}  // namespace

RunResult run(const SimConfig& config, const Scenario& scenario) {
    if (config.n_robots < 1) throw std::invalid_argument("n_robots must be >= 1");
    if (config.max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
    if (config.query_every < 1) throw std::invalid_argument("query_every must be >= 1");
    if (static_cast<std::size_t>(config.n_robots) > scenario.spawn_poses.size())
        throw std::invalid_argument("scenario provides too few spawn poses");
    const int n = config.gait_params.steps_per_cycle;
    if (n < 4) throw std::invalid_argument("steps_per_cycle must be >= 4");

    RunResult result;
    result.logs.resize(static_cast<std::size_t>(config.n_robots));
    result.query_counts.assign(static_cast<std::size_t>(config.n_robots), 0);
    EventLog log(&result.logs);

    const fuzzy::Engine fis;
    std::unique_ptr<semantics::SemanticBackend> backend;
    if (config.llm_endpoint.empty()) {
        backend = std::make_unique<semantics::HeuristicBackend>(config.tuning);
    } else {
        semantics::RemoteConfig remote = config.remote;
        remote.endpoint = config.llm_endpoint;
        backend = std::make_unique<semantics::RemoteBackend>(remote, config.tuning);
    }

    const double cycle_dist =
        config.gait_params.distance_gain * config.gait_params.base_amplitude;

    std::vector<RobotRuntime> robots(static_cast<std::size_t>(config.n_robots));
    std::optional<baselines::BcdPlan> bcd_plan;
    if (config.controller == ControllerKind::bcd)
        bcd_plan = baselines::plan_bcd(scenario, config.bcd_spacing, config.robot_radius);

    Vec2 ooi_center{scenario.arena.width / 2.0, scenario.arena.height / 2.0};
    if (!scenario.oois.empty()) {
        double lox = 1e18, hix = -1e18, loy = 1e18, hiy = -1e18;
        for (const auto& o : scenario.oois) {
            lox = std::min(lox, o.position.x);
            hix = std::max(hix, o.position.x);
            loy = std::min(loy, o.position.y);
            hiy = std::max(hiy, o.position.y);
        }
        ooi_center = {(lox + hix) / 2.0, (loy + hiy) / 2.0};
    }

    std::vector<rng::Stream> bb_streams;
    for (int i = 0; i < config.n_robots; ++i)
        bb_streams.emplace_back(config.seed, "bb-walk", static_cast<std::uint64_t>(i));

    for (int i = 0; i < config.n_robots; ++i) {
        RobotRuntime& robot = robots[static_cast<std::size_t>(i)];
        robot.id = i;
        robot.pose = scenario.spawn_poses[static_cast<std::size_t>(i)];
        robot.pose.t = 0;
        if (!gait::pose_is_free(robot.pose, scenario, config.robot_radius))
            throw std::invalid_argument("spawn pose is not collision-free");
        robot.grid.resolution = config.grid_resolution;
        robot.current_gait = gait::generate_gait(0.0, 0.0, config.gait_params);

        if (config.controller == ControllerKind::bcd) {
            // Contiguous chunk of the serpentine plan per robot, with
            // obstacle-aware transit hops between lanes.
            const auto& all = bcd_plan->lanes;
            const std::size_t chunk =
                (all.size() + static_cast<std::size_t>(config.n_robots) - 1) /
                static_cast<std::size_t>(config.n_robots);
            const std::size_t lo = chunk * static_cast<std::size_t>(i);
            const std::size_t hi = std::min(all.size(), lo + chunk);
            for (std::size_t k = lo; k < hi && k < all.size(); ++k) {
                robot.waypoints.push_back(all[k].start);
                robot.waypoints.push_back(all[k].end);
            }
        } else if (config.controller == ControllerKind::bb) {
            robot.walk.anchor_start = robot.pose.position();
            robot.walk.anchor_end = ooi_center;
            robot.walk.step_sigma = config.bb_step_sigma;
            robot.walk.seed = rng::substream_seed(config.seed, "bb-walk",
                                                  static_cast<std::uint64_t>(i));
            const double budget = config.bb_length_budget > 0.0
                                      ? config.bb_length_budget
                                      : cycle_dist * (config.max_steps / n + 1);
            robot.walk.length_budget = budget;
            robot.walk.total_steps =
                std::max(1, static_cast<int>(std::floor(budget / cycle_dist)));
        }

        if (config.max_steps > 0) {
            robot.grid.update(robot.pose);
            result.logs[static_cast<std::size_t>(i)].poses.push_back(robot.pose);
            log.robot(i, format("pose r=%d t=0 x=%.6f y=%.6f z=%.6f th=%.6f", i,
                                robot.pose.x, robot.pose.y, robot.pose.z,
                                robot.pose.theta));
        }
    }

    for (std::int64_t t = 0; t < config.max_steps; ++t) {
        const bool cycle_start = (t % n) == 0;
        const std::int64_t cycle = t / n;
        const bool query_cycle = cycle_start && (cycle % config.query_every == 0);
        const std::int64_t query_index = cycle / config.query_every;

        // Communication round barrier, before any robot's next query.
        if (query_cycle && config.controller == ControllerKind::semantic_fuzzy &&
            config.comms_enabled && config.n_robots > 1 && query_index > 0 &&
            query_index % config.channel.round_period == 0) {
            const std::int64_t round_no = query_index / config.channel.round_period;
            std::vector<comms::SemanticMessage> messages;
            for (RobotRuntime& robot : robots) {
                if (!robot.last_descriptors) continue;
                messages.push_back(comms::encode_message(
                    *robot.last_descriptors, robot.grid, robot.pose, config.goal,
                    config.channel.token_budget, robot.id, round_no));
            }
            const auto deliveries = comms::transmit(config.channel, messages, round_no);
            for (const auto& d : deliveries)
                log.global(format("comm rnd=%lld t=%lld from=%d to=%d ok=%d",
                                  static_cast<long long>(round_no),
                                  static_cast<long long>(t), d.from, d.to,
                                  d.delivered ? 1 : 0));
            for (RobotRuntime& robot : robots) {
                std::vector<comms::SemanticMessage> inbox;
                for (const auto& d : deliveries) {
                    if (!d.delivered || d.to != robot.id) continue;
                    for (const auto& msg : messages)
                        if (msg.robot_id == d.from) inbox.push_back(msg);
                }
                comms::decode_merge(inbox, robot.shared_map);
                for (const auto& msg : messages) {
                    if (msg.robot_id == robot.id) {
                        robot.own_claim = msg.claim;
                        robot.own_claim_round = round_no;
                    }
                }
                robot.policy_adj = comms::integrate_policy(
                    robot.own_claim, robot.own_claim_round, robot.shared_map, robot.id,
                    config.claim_penalty, round_no, config.claim_expire_rounds);
                log.robot(robot.id,
                          format("policy r=%d rnd=%lld bias=%s extra=%zu", robot.id,
                                 static_cast<long long>(round_no),
                                 bias_string(robot.policy_adj).c_str(),
                                 robot.policy_adj.extra_visited.size()));
            }
        }

        for (RobotRuntime& robot : robots) {
            if (cycle_start) {
                switch (config.controller) {
                    case ControllerKind::semantic_fuzzy: {
                        if (!query_cycle) break;
                        const auto bundle = sensing::sense(scenario, robot.pose,
                                                           robot.grid, config.sensor);
                        auto features = semantics::encode_features(
                            bundle, robot.grid, scenario.arena, robot.last_descriptors,
                            robot.last_labels, &robot.policy_adj.extra_visited);
                        features.sector_bias =
                            body_bias(robot.policy_adj, robot.pose,
                                      config.sensor.fov, config.claim_penalty,
                                      2.5);
                        const auto proto =
                            semantics::render_proto_prompt(features, config.tuning);
                        const auto prompt = semantics::assemble_prompt(
                            proto, bundle, robot.grid, robot.last_descriptors,
                            config.goal, features);
                        const auto inferred = backend->infer(prompt);
                        if (inferred.fallback_used) ++result.llm_fallbacks;

                        const bool entering_recovery =
                            inferred.descriptors.recommended_heading ==
                            semantics::HeadingRec::rotate_in_place;
                        FuzzyLabelSet labels = inferred.labels;
                        if (!entering_recovery && !robot.recovery_active &&
                            robot.last_labels)
                            labels = semantics::continuity_guard(labels,
                                                                 *robot.last_labels);
                        if (entering_recovery != robot.recovery_active)
                            log.robot(robot.id,
                                      format("recover r=%d t=%lld active=%d", robot.id,
                                             static_cast<long long>(t),
                                             entering_recovery ? 1 : 0));
                        robot.recovery_active = entering_recovery;
                        robot.last_labels = labels;
                        robot.last_descriptors = inferred.descriptors;

                        const auto control = fis.evaluate(labels);
                        robot.delta = control.delta;
                        robot.phi = control.phi;
                        ++result.query_counts[static_cast<std::size_t>(robot.id)];
                        log.robot(robot.id,
                                  format("query r=%d t=%lld cyc=%lld labels=%s "
                                         "delta=%.6f phi=%.6f rec=%d fb=%d",
                                         robot.id, static_cast<long long>(t),
                                         static_cast<long long>(cycle),
                                         labels.to_string().c_str(), robot.delta,
                                         robot.phi, entering_recovery ? 1 : 0,
                                         inferred.fallback_used ? 1 : 0));
                        break;
                    }
                    case ControllerKind::bcd: {
                        const auto advance_waypoint = [&](RobotRuntime& r) {
                            ++r.waypoint_index;
                            r.hop_queue.clear();
                            r.hop_index = 0;
                            r.rerouted = false;
                            r.stall_cycles = 0;
                            r.last_waypoint_dist = 1e18;
                        };
                        if (robot.waypoints.empty() ||
                            robot.waypoint_index >= robot.waypoints.size()) {
                            robot.delta = 0.0;
                            robot.phi = 0.0;  // plan complete, park
                            robot.cycle_truncations = 0;
                            break;
                        }
                        if (robot.hop_index >= robot.hop_queue.size()) {
                            robot.hop_queue = baselines::route_between(
                                scenario, robot.pose.position(),
                                robot.waypoints[robot.waypoint_index],
                                config.robot_radius);
                            robot.hop_index = 0;
                        }
                        const Vec2 target = robot.hop_queue[robot.hop_index];
                        const double dist = (target - robot.pose.position()).norm();
                        if (dist < robot.last_waypoint_dist - 0.02) {
                            robot.stall_cycles = 0;  // making progress
                            robot.last_waypoint_dist = dist;
                        } else {
                            ++robot.stall_cycles;
                        }
                        if (dist <= 0.4) {
                            ++robot.hop_index;
                            robot.stall_cycles = 0;
                            robot.last_waypoint_dist = 1e18;
                            if (robot.hop_index >= robot.hop_queue.size())
                                advance_waypoint(robot);
                        } else if (robot.stall_cycles > 12) {
                            if (!robot.rerouted) {
                                // One fresh route from wherever we got wedged.
                                robot.hop_queue = baselines::route_between(
                                    scenario, robot.pose.position(),
                                    robot.waypoints[robot.waypoint_index],
                                    config.robot_radius);
                                robot.hop_index = 0;
                                robot.rerouted = true;
                                robot.stall_cycles = 0;
                                robot.last_waypoint_dist = 1e18;
                            } else {
                                advance_waypoint(robot);  // unreachable; skip
                            }
                        }
                        if (robot.waypoint_index < robot.waypoints.size() &&
                            robot.hop_index < robot.hop_queue.size()) {
                            const auto cmd = baselines::steer_toward(
                                robot.pose, robot.hop_queue[robot.hop_index],
                                config.gait_params);
                            robot.delta = cmd.delta;
                            robot.phi = cmd.phi;
                        } else {
                            robot.delta = 0.0;
                            robot.phi = 0.0;
                        }
                        // Wedged against an obstacle corner: rotate off it.
                        if (robot.cycle_truncations >= n / 2) {
                            robot.delta = config.gait_params.delta_max;
                            robot.phi = 0.25;
                        }
                        robot.cycle_truncations = 0;
                        break;
                    }
                    case ControllerKind::bb: {
                        if (robot.walk.steps_taken >= robot.walk.total_steps) {
                            // Budget exhausted: bridge to a fresh random anchor.
                            auto& stream = bb_streams[static_cast<std::size_t>(robot.id)];
                            robot.walk.anchor_start = robot.pose.position();
                            robot.walk.anchor_end = {
                                stream.uniform(0.5, scenario.arena.width - 0.5),
                                stream.uniform(0.5, scenario.arena.height - 0.5)};
                            robot.walk.steps_taken = 0;
                        }
                        const Pose proposal = baselines::step_bb(
                            robot.walk, robot.pose,
                            bb_streams[static_cast<std::size_t>(robot.id)],
                            scenario.arena, config.robot_radius);
                        const auto cmd = baselines::steer_toward(
                            robot.pose, proposal.position(), config.gait_params);
                        robot.delta = cmd.delta;
                        // Keep wandering while turning; proposals re-randomize
                        // every cycle, so a rotate-in-place follower would stall.
                        const double dist =
                            (proposal.position() - robot.pose.position()).norm();
                        double phi = std::clamp(
                            1.0 - std::abs(cmd.heading_error) / 2.0, 0.25, 1.0);
                        robot.phi = std::min(phi, std::max(dist / cycle_dist, 0.0));
                        break;
                    }
                }
                robot.current_gait =
                    gait::generate_gait(robot.delta, robot.phi, config.gait_params);
            }

            const int phase = static_cast<int>(t % n);
            const auto outcome =
                gait::apply_substep(robot.pose, phase, robot.delta, robot.phi,
                                    config.gait_params, scenario, config.robot_radius);
            if (outcome.truncated) {
                ++result.truncation_count;
                ++robot.cycle_truncations;
                log.robot(robot.id, format("trunc r=%d t=%lld", robot.id,
                                           static_cast<long long>(t)));
            }
            robot.pose = outcome.pose;
            robot.pose.t = t + 1;
            robot.grid.update(robot.pose);
            robot.gait_phase = static_cast<int>((t + 1) % n);
            result.logs[static_cast<std::size_t>(robot.id)].poses.push_back(robot.pose);

            const auto& u = robot.current_gait.steps[static_cast<std::size_t>(phase)];
            log.robot(robot.id,
                      format("pose r=%d t=%lld x=%.6f y=%.6f z=%.6f th=%.6f", robot.id,
                             static_cast<long long>(t + 1), robot.pose.x, robot.pose.y,
                             robot.pose.z, robot.pose.theta));
            log.robot(robot.id,
                      format("gait r=%d t=%lld u=%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,"
                             "%.4f,%.4f,%.4f,%.4f,%.4f",
                             robot.id, static_cast<long long>(t), u[0], u[1], u[2],
                             u[3], u[4], u[5], u[6], u[7], u[8], u[9], u[10], u[11]));
        }
    }

    result.per_robot.reserve(result.logs.size());
    for (const auto& traj : result.logs) {
        result.per_robot.push_back(metrics::report_for(
            {traj}, scenario, config.coverage_radius, config.metrics_resolution));
    }
    result.team = metrics::report_for(result.logs, scenario, config.coverage_radius,
                                      config.metrics_resolution);
    result.event_log = log.take();
    return result;
}

}  // namespace reefcover::engine
