#pragma once

#include <string>

#include "reefcover/engine.hpp"

namespace reefcover::config {

// JSON serialization of the full run configuration; every field has the
// defaults from the experimental setup so a minimal file overrides only what
// it names. Schema in docs/file-formats.md.
std::string to_json(const engine::SimConfig& config);
engine::SimConfig config_from_json(const std::string& text);
engine::SimConfig load_config(const std::string& path);
void save_config(const engine::SimConfig& config, const std::string& path);

struct RunManifest {
    std::string version;
    engine::SimConfig config;
    world::Scenario scenario;
    std::vector<std::string> artifact_paths;
    double duration_s = 0.0;
    int llm_fallbacks = 0;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace reefcover::config
