#include "reefcover/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace reefcover::config {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_json(const engine::SimConfig& c) {
    ordered_json j;
    j["scenario"] = c.scenario_name;
    j["controller"] = std::string(engine::to_string(c.controller));
    j["robots"] = c.n_robots;
    j["seed"] = c.seed;
    j["max_steps"] = c.max_steps;
    j["timestep_ms"] = c.timestep_ms;
    j["query_every"] = c.query_every;
    j["robot_radius"] = c.robot_radius;
    j["grid_resolution"] = c.grid_resolution;
    j["scenario_params"] = {{"arena_width", c.scenario_params.arena.width},
                            {"arena_height", c.scenario_params.arena.height},
                            {"ooi_count", c.scenario_params.ooi_count},
                            {"gap_width", c.scenario_params.gap_width},
                            {"jitter", c.scenario_params.jitter},
                            {"ooi_jitter", c.scenario_params.ooi_jitter}};
    j["sensor"] = {{"fov", c.sensor.fov},
                   {"max_range", c.sensor.max_range},
                   {"radar_radius", c.sensor.radar_radius},
                   {"radar_sectors", c.sensor.radar_sectors}};
    j["gait"] = {{"base_amplitude", c.gait_params.base_amplitude},
                 {"curvature_gain", c.gait_params.curvature_gain},
                 {"delta_max", c.gait_params.delta_max},
                 {"steps_per_cycle", c.gait_params.steps_per_cycle},
                 {"heading_gain", c.gait_params.heading_gain},
                 {"distance_gain", c.gait_params.distance_gain}};
    j["comms"] = {{"enabled", c.comms_enabled},
                  {"round_period", c.channel.round_period},
                  {"token_budget", c.channel.token_budget},
                  {"loss_prob", c.channel.loss_prob},
                  {"claim_expire_rounds", c.claim_expire_rounds},
                  {"claim_penalty", c.claim_penalty}};
    j["metrics"] = {{"coverage_radius", c.coverage_radius},
                    {"resolution", c.metrics_resolution}};
    j["llm"] = {{"endpoint", c.llm_endpoint},
                {"model", c.remote.model},
                {"temperature", c.remote.temperature},
                {"max_tokens", c.remote.max_tokens},
                {"timeout_s", c.remote.timeout_s},
                {"api_key_env", c.remote.api_key_env}};
    j["baselines"] = {{"bcd_spacing", c.bcd_spacing},
                      {"bb_step_sigma", c.bb_step_sigma},
                      {"bb_length_budget", c.bb_length_budget}};
    return j.dump(2);
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

engine::SimConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    engine::SimConfig c;
    maybe(j, "scenario", c.scenario_name);
    if (j.contains("controller"))
        c.controller = engine::controller_from_string(j.at("controller").get<std::string>());
    maybe(j, "robots", c.n_robots);
    maybe(j, "seed", c.seed);
    maybe(j, "max_steps", c.max_steps);
    maybe(j, "timestep_ms", c.timestep_ms);
    maybe(j, "query_every", c.query_every);
    maybe(j, "robot_radius", c.robot_radius);
    maybe(j, "grid_resolution", c.grid_resolution);
    if (j.contains("scenario_params")) {
        const json& p = j.at("scenario_params");
        maybe(p, "arena_width", c.scenario_params.arena.width);
        maybe(p, "arena_height", c.scenario_params.arena.height);
        maybe(p, "ooi_count", c.scenario_params.ooi_count);
        maybe(p, "gap_width", c.scenario_params.gap_width);
        maybe(p, "jitter", c.scenario_params.jitter);
        maybe(p, "ooi_jitter", c.scenario_params.ooi_jitter);
    }
    c.scenario_params.robot_radius = c.robot_radius;
    if (j.contains("sensor")) {
        const json& p = j.at("sensor");
        maybe(p, "fov", c.sensor.fov);
        maybe(p, "max_range", c.sensor.max_range);
        maybe(p, "radar_radius", c.sensor.radar_radius);
        maybe(p, "radar_sectors", c.sensor.radar_sectors);
    }
    if (j.contains("gait")) {
        const json& p = j.at("gait");
        maybe(p, "base_amplitude", c.gait_params.base_amplitude);
        maybe(p, "curvature_gain", c.gait_params.curvature_gain);
        maybe(p, "delta_max", c.gait_params.delta_max);
        maybe(p, "steps_per_cycle", c.gait_params.steps_per_cycle);
        maybe(p, "heading_gain", c.gait_params.heading_gain);
        maybe(p, "distance_gain", c.gait_params.distance_gain);
    }
    if (j.contains("comms")) {
        const json& p = j.at("comms");
        maybe(p, "enabled", c.comms_enabled);
        maybe(p, "round_period", c.channel.round_period);
        maybe(p, "token_budget", c.channel.token_budget);
        maybe(p, "loss_prob", c.channel.loss_prob);
        maybe(p, "claim_expire_rounds", c.claim_expire_rounds);
        maybe(p, "claim_penalty", c.claim_penalty);
    }
    if (j.contains("metrics")) {
        const json& p = j.at("metrics");
        maybe(p, "coverage_radius", c.coverage_radius);
        maybe(p, "resolution", c.metrics_resolution);
    }
    if (j.contains("llm")) {
        const json& p = j.at("llm");
        maybe(p, "endpoint", c.llm_endpoint);
        maybe(p, "model", c.remote.model);
        maybe(p, "temperature", c.remote.temperature);
        maybe(p, "max_tokens", c.remote.max_tokens);
        maybe(p, "timeout_s", c.remote.timeout_s);
        maybe(p, "api_key_env", c.remote.api_key_env);
    }
    if (j.contains("baselines")) {
        const json& p = j.at("baselines");
        maybe(p, "bcd_spacing", c.bcd_spacing);
        maybe(p, "bb_step_sigma", c.bb_step_sigma);
        maybe(p, "bb_length_budget", c.bb_length_budget);
    }
    return c;
}

engine::SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

void save_config(const engine::SimConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    out << to_json(config) << "\n";
}

std::string manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["version"] = m.version;
    j["config"] = json::parse(to_json(m.config));
    j["scenario"] = json::parse(world::scenario_to_json(m.scenario));
    j["artifacts"] = m.artifact_paths;
    j["duration_s"] = m.duration_s;
    j["llm_fallbacks"] = m.llm_fallbacks;
    return j.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunManifest m;
    m.version = j.value("version", std::string(kVersion));
    m.config = config_from_json(j.at("config").dump());
    m.scenario = world::scenario_from_json(j.at("scenario").dump());
    if (j.contains("artifacts"))
        m.artifact_paths = j.at("artifacts").get<std::vector<std::string>>();
    m.duration_s = j.value("duration_s", 0.0);
    m.llm_fallbacks = j.value("llm_fallbacks", 0);
    return m;
}

}  // namespace reefcover::config
