// reefcover: deterministic multi-robot underwater-coverage simulator.
// `run` executes one experiment; `battery` sweeps scenarios x controllers x seeds.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "reefcover/config.hpp"
#include "reefcover/engine.hpp"
#include "reefcover/plot.hpp"

namespace fs = std::filesystem;
using reefcover::config::RunManifest;
using reefcover::engine::ControllerKind;
using reefcover::engine::RunResult;
using reefcover::engine::SimConfig;

namespace {

constexpr const char* kCsvHeader =
    "scenario,controller,robots,robot,seed,total_length,covered_oois,"
    "coverage_length,coverage_ratio,ooi_density,ooi_efficiency";

std::string csv_cell(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return buf;
}

std::string csv_row(const SimConfig& config, const std::string& robot,
                    const reefcover::metrics::MetricsReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%s,%llu,%.2f,%d,%.2f,%.2f,%s,%s",
                  config.scenario_name.c_str(),
                  std::string(to_string(config.controller)).c_str(), config.n_robots,
                  robot.c_str(), static_cast<unsigned long long>(config.seed),
                  r.total_length, r.covered_ooi_count, r.coverage_length,
                  r.coverage_ratio, csv_cell(r.ooi_density).c_str(),
                  csv_cell(r.ooi_efficiency).c_str());
    return buf;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const std::size_t dots = part.find("..");
        if (dots != std::string::npos) {
            const std::uint64_t lo = std::stoull(part.substr(0, dots));
            const std::uint64_t hi = std::stoull(part.substr(dots + 2));
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else if (!part.empty()) {
            seeds.push_back(std::stoull(part));
        }
    }
    if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds parsed");
    return seeds;
}

struct BatteryCell {
    ControllerKind controller;
    int robots;
};

std::vector<BatteryCell> parse_cells(const std::string& text) {
    std::vector<BatteryCell> cells;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        const std::size_t colon = part.find(':');
        BatteryCell cell{ControllerKind::semantic_fuzzy, 1};
        if (colon == std::string::npos) {
            cell.controller = reefcover::engine::controller_from_string(part);
        } else {
            cell.controller =
                reefcover::engine::controller_from_string(part.substr(0, colon));
            cell.robots = std::stoi(part.substr(colon + 1));
        }
        cells.push_back(cell);
    }
    if (cells.empty()) throw CLI::ValidationError("--cells", "no battery cells parsed");
    return cells;
}

reefcover::world::Scenario make_scenario(const SimConfig& config,
                                         const std::string& scenario_file) {
    if (!scenario_file.empty()) {
        auto s = reefcover::world::load_scenario(scenario_file);
        reefcover::world::validate_scenario(s, config.robot_radius);
        return s;
    }
    return reefcover::world::build_scenario(config.scenario_name,
                                            config.scenario_params, config.seed);
}

struct RunArtifacts {
    RunResult result;
    fs::path manifest;
    fs::path csv;
    fs::path events;
    fs::path svg;
};

RunArtifacts execute_run(const SimConfig& config,
                         const reefcover::world::Scenario& scenario,
                         const fs::path& out_dir) {
    fs::create_directories(out_dir);
    RunArtifacts art;
    art.manifest = out_dir / "manifest.json";
    art.csv = out_dir / "metrics.csv";
    art.events = out_dir / "events.log";
    art.svg = out_dir / "trajectory.svg";

    RunManifest manifest;
    manifest.version = reefcover::config::kVersion;
    manifest.config = config;
    manifest.scenario = scenario;
    manifest.artifact_paths = {art.csv.string(), art.events.string(), art.svg.string()};
    {
        std::ofstream out(art.manifest);
        out << reefcover::config::manifest_to_json(manifest) << "\n";
    }

    const auto t0 = std::chrono::steady_clock::now();
    art.result = reefcover::engine::run(config, scenario);
    manifest.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.llm_fallbacks = art.result.llm_fallbacks;
    {
        std::ofstream out(art.manifest);
        out << reefcover::config::manifest_to_json(manifest) << "\n";
    }

    {
        std::ofstream out(art.csv);
        out << kCsvHeader << "\n";
        out << csv_row(config, "team", art.result.team) << "\n";
        for (std::size_t k = 0; k < art.result.per_robot.size(); ++k)
            out << csv_row(config, std::to_string(k), art.result.per_robot[k]) << "\n";
    }
    {
        std::ofstream out(art.events);
        out << art.result.event_log;
    }
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < art.result.logs.size(); ++k)
        labels.push_back("robot " + std::to_string(k) + " (" +
                         std::string(to_string(config.controller)) + ")");
    reefcover::plot::write_scene_svg(scenario, art.result.logs, labels, art.svg.string());
    return art;
}

int cmd_run(SimConfig config, const std::string& scenario_file,
            const std::string& replay_path, const fs::path& out_dir) {
    reefcover::world::Scenario scenario;
    if (!replay_path.empty()) {
        std::ifstream in(replay_path);
        if (!in) {
            std::cerr << "cannot read manifest: " << replay_path << "\n";
            return 1;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        const RunManifest m = reefcover::config::manifest_from_json(buffer.str());
        config = m.config;
        scenario = m.scenario;
    } else {
        scenario = make_scenario(config, scenario_file);
    }

    const RunArtifacts art = execute_run(config, scenario, out_dir);
    const auto& team = art.result.team;
    std::printf("scenario=%s controller=%s robots=%d seed=%llu\n",
                config.scenario_name.c_str(),
                std::string(to_string(config.controller)).c_str(), config.n_robots,
                static_cast<unsigned long long>(config.seed));
    std::printf("  total_length=%.2f m  covered_oois=%d  coverage_length=%.2f m\n",
                team.total_length, team.covered_ooi_count, team.coverage_length);
    std::printf("  coverage_ratio=%.2f%%  density=%s /m  efficiency=%s /m\n",
                team.coverage_ratio, csv_cell(team.ooi_density).c_str(),
                csv_cell(team.ooi_efficiency).c_str());
    if (art.result.llm_fallbacks > 0)
        std::printf("  llm fallbacks: %d (heuristic backend used)\n",
                    art.result.llm_fallbacks);
    std::printf("  artifacts in %s\n", out_dir.string().c_str());
    return 0;
}

int cmd_battery(SimConfig base, const std::vector<std::uint64_t>& seeds,
                const std::vector<std::string>& scenarios,
                const std::vector<BatteryCell>& cells, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream csv(out_dir / "metrics.csv");
    csv << kCsvHeader << "\n";

    struct Agg {
        double ratio_sum = 0.0;
        double eff_sum = 0.0;
        double density_sum = 0.0;
        int eff_n = 0;
        int n = 0;
    };
    std::map<std::string, std::map<std::string, Agg>> summary;
    int failures = 0;

    for (const std::string& scenario_name : scenarios) {
        std::map<std::string, bool> plotted;
        for (const BatteryCell& cell : cells) {
            for (const std::uint64_t seed : seeds) {
                SimConfig config = base;
                config.scenario_name = scenario_name;
                config.controller = cell.controller;
                config.n_robots = cell.robots;
                config.seed = seed;
                const std::string cell_name =
                    std::string(to_string(cell.controller)) + ":" +
                    std::to_string(cell.robots);
                try {
                    const auto scenario = make_scenario(config, "");
                    const RunResult result = reefcover::engine::run(config, scenario);
                    csv << csv_row(config, "team", result.team) << "\n";
                    for (std::size_t k = 0; k < result.per_robot.size(); ++k)
                        csv << csv_row(config, std::to_string(k), result.per_robot[k])
                            << "\n";
                    Agg& agg = summary[scenario_name][cell_name];
                    agg.ratio_sum += result.team.coverage_ratio;
                    if (result.team.ooi_efficiency) {
                        agg.eff_sum += *result.team.ooi_efficiency;
                        ++agg.eff_n;
                    }
                    if (result.team.ooi_density) agg.density_sum += *result.team.ooi_density;
                    ++agg.n;
                    if (!plotted[cell_name]) {
                        plotted[cell_name] = true;
                        std::vector<std::string> labels;
                        for (std::size_t k = 0; k < result.logs.size(); ++k)
                            labels.push_back("robot " + std::to_string(k) + " (" +
                                             cell_name + ")");
                        fs::path svg = out_dir / (scenario_name + "_" +
                                                  std::string(to_string(cell.controller)) +
                                                  "_" + std::to_string(cell.robots) +
                                                  "robots.svg");
                        reefcover::plot::write_scene_svg(scenario, result.logs, labels,
                                                         svg.string());
                    }
                } catch (const std::exception& e) {
                    ++failures;
                    std::cerr << "run failed (" << scenario_name << ", " << cell_name
                              << ", seed " << seed << "): " << e.what() << "\n";
                }
            }
        }
    }

    std::printf("\n%-22s %-20s %10s %10s %10s\n", "scenario", "configuration",
                "ratio(%)", "density", "efficiency");
    for (const auto& [scenario_name, cells_map] : summary) {
        for (const auto& [cell_name, agg] : cells_map) {
            std::printf("%-22s %-20s %10.2f %10.2f %10.2f\n", scenario_name.c_str(),
                        cell_name.c_str(), agg.ratio_sum / agg.n,
                        agg.density_sum / agg.n,
                        agg.eff_n > 0 ? agg.eff_sum / agg.eff_n : 0.0);
        }
    }
    std::printf("\nCSV: %s\n", (out_dir / "metrics.csv").string().c_str());
    if (failures > 0) std::fprintf(stderr, "%d run(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

void add_common_flags(CLI::App* cmd, SimConfig& config, std::string& config_file,
                      std::string& comms_mode) {
    cmd->add_option("--config", config_file, "JSON config file (flags win)");
    cmd->add_option("--scenario", config.scenario_name,
                    "grid_world | e_shape | disconnected_paths");
    cmd->add_option("--robots", config.n_robots, "number of robots (1-3)");
    cmd->add_option("--seed", config.seed, "master seed");
    cmd->add_option("--max-steps", config.max_steps, "simulation steps (256 ms each)");
    cmd->add_option("--controller", [&config](const std::vector<std::string>& v) {
        config.controller = reefcover::engine::controller_from_string(v.back());
        return true;
    }, "semantic-fuzzy | bcd | bb");
    cmd->add_option("--comms", comms_mode, "on | off");
    cmd->add_option("--loss-prob", config.channel.loss_prob,
                    "communication loss probability");
    cmd->add_option("--llm-endpoint", config.llm_endpoint,
                    "remote semantic backend endpoint (http)");
    cmd->add_option("--ooi-count", config.scenario_params.ooi_count,
                    "override scenario OOI count");
}

SimConfig resolve_config(const std::string& config_file, CLI::App* cmd,
                         const SimConfig& flag_values) {
    if (config_file.empty()) return flag_values;
    SimConfig from_file = reefcover::config::load_config(config_file);
    // Flags explicitly provided on the command line override the file.
    SimConfig merged = from_file;
    const auto given = [cmd](const std::string& name) {
        return cmd->count(name) > 0;
    };
    if (given("--scenario")) merged.scenario_name = flag_values.scenario_name;
    if (given("--robots")) merged.n_robots = flag_values.n_robots;
    if (given("--seed")) merged.seed = flag_values.seed;
    if (given("--max-steps")) merged.max_steps = flag_values.max_steps;
    if (given("--controller")) merged.controller = flag_values.controller;
    if (given("--loss-prob")) merged.channel.loss_prob = flag_values.channel.loss_prob;
    if (given("--llm-endpoint")) merged.llm_endpoint = flag_values.llm_endpoint;
    if (given("--ooi-count"))
        merged.scenario_params.ooi_count = flag_values.scenario_params.ooi_count;
    return merged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reefcover: semantics-guided fuzzy control coverage simulator"};
    app.require_subcommand(1);

    SimConfig run_config;
    std::string run_config_file, run_scenario_file, run_replay, run_comms = "on";
    std::string run_out = "out";
    CLI::App* run = app.add_subcommand("run", "execute a single experiment run");
    add_common_flags(run, run_config, run_config_file, run_comms);
    run->add_option("--scenario-file", run_scenario_file,
                    "load scenario from JSON instead of generating it");
    run->add_option("--replay", run_replay, "re-run from a manifest.json");
    run->add_option("--out", run_out, "output directory");

    SimConfig battery_config;
    std::string battery_config_file, battery_comms = "on";
    std::string battery_out = "battery_out";
    std::string battery_seeds = "1..5";
    std::string battery_scenarios = "grid_world,e_shape,disconnected_paths";
    std::string battery_cells = "semantic-fuzzy:2,semantic-fuzzy:1,bcd:1,bb:1";
    CLI::App* battery =
        app.add_subcommand("battery", "sweep scenarios x configurations x seeds");
    add_common_flags(battery, battery_config, battery_config_file, battery_comms);
    battery->add_option("--seeds", battery_seeds, "e.g. 1..5 or 1,2,7");
    battery->add_option("--scenarios", battery_scenarios, "comma-separated names");
    battery->add_option("--cells", battery_cells,
                        "comma-separated controller:robots configurations");
    battery->add_option("--out", battery_out, "output directory");

    std::string scen_name = "grid_world";
    std::uint64_t scen_seed = 42;
    std::string scen_out = "scenario.json";
    CLI::App* scen = app.add_subcommand("scenario", "generate and export a scenario");
    scen->add_option("--name", scen_name, "scenario name");
    scen->add_option("--seed", scen_seed, "scenario seed");
    scen->add_option("--out", scen_out, "output JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            SimConfig config = resolve_config(run_config_file, run, run_config);
            if (run->count("--comms")) config.comms_enabled = (run_comms != "off");
            return cmd_run(config, run_scenario_file, run_replay, run_out);
        }
        if (battery->parsed()) {
            SimConfig config = resolve_config(battery_config_file, battery, battery_config);
            if (battery->count("--comms"))
                config.comms_enabled = (battery_comms != "off");
            return cmd_battery(config, parse_seeds(battery_seeds),
                               [&] {
                                   std::vector<std::string> out;
                                   std::stringstream ss(battery_scenarios);
                                   std::string part;
                                   while (std::getline(ss, part, ','))
                                       if (!part.empty()) out.push_back(part);
                                   return out;
                               }(),
                               parse_cells(battery_cells), battery_out);
        }
        if (scen->parsed()) {
            reefcover::world::ScenarioParams params;
            const auto scenario =
                reefcover::world::build_scenario(scen_name, params, scen_seed);
            reefcover::world::save_scenario(scenario, scen_out);
            std::printf("wrote %s (%zu obstacles, %zu OOIs)\n", scen_out.c_str(),
                        scenario.obstacles.size(), scenario.oois.size());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
