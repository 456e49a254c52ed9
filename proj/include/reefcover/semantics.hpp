#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reefcover/labels.hpp"
#include "reefcover/sensing.hpp"

namespace reefcover::semantics {

using labels::FuzzyLabelSet;
using labels::Term;
using sensing::ObservationBundle;
using sensing::SectorStats;
using world::Arena;
using world::CellSet;
using world::OccupancyGrid;

enum class ObstacleLevel { clear, near, blocking };
enum class OoiLevel { none, sparse, dense };
enum class ExploreLevel { visited, partial, unexplored };
enum class HeadingRec { hard_left, left, straight, right, hard_right, rotate_in_place };

std::string_view to_string(ObstacleLevel);
std::string_view to_string(OoiLevel);
std::string_view to_string(ExploreLevel);
std::string_view to_string(HeadingRec);

struct SemanticDescriptors {
    std::array<ObstacleLevel, 3> obstacle_summary{ObstacleLevel::clear,
                                                  ObstacleLevel::clear,
                                                  ObstacleLevel::clear};
    std::array<OoiLevel, 3> ooi_summary{OoiLevel::none, OoiLevel::none, OoiLevel::none};
    std::array<ExploreLevel, 3> exploration_summary{ExploreLevel::unexplored,
                                                    ExploreLevel::unexplored,
                                                    ExploreLevel::unexplored};
    HeadingRec recommended_heading = HeadingRec::straight;

    bool operator==(const SemanticDescriptors&) const = default;
};

struct LatentFeatures {
    SectorStats sector_stats;
    double min_obstacle_distance = 0.0;  // radar minimum; radius when clear
    double heading = 0.0;
    double visited_fraction_global = 0.0;
    std::optional<FuzzyLabelSet> previous_labels;
    // Additive per-forward-sector penalty injected by the comms policy
    // integration (zero when no peers are heard).
    std::array<double, 3> sector_bias{0.0, 0.0, 0.0};
};

struct ProtoPrompt {
    std::vector<std::string> sentences;

    std::string joined() const;
};

struct GoalSpec {
    bool maximize_coverage = true;
    bool minimize_revisit = true;

    std::string to_string() const;
};

struct StructuredPrompt {
    ProtoPrompt proto;
    std::string grounding_digest;
    std::string continuity_ref;
    std::string goal;
    LatentFeatures features;  // structured view for the heuristic backend

    std::string serialize() const;
};

// Classification thresholds behind the level summaries; the full decision
// table is documented in docs/heuristic-backend.md.
struct BackendTuning {
    double obstacle_blocking = 0.6;   // m
    double obstacle_near = 1.5;       // m
    int ooi_dense = 3;                // detections
    double explored_visited = 0.1;    // unexplored fraction below -> visited
    double explored_unexplored = 0.9; // unexplored fraction above -> unexplored
    double ooi_weight = 2.0;
    int ooi_count_cap = 4;            // score saturates beyond this many
    double ooi_visited_discount = 0.1;
    double unexplored_weight = 2.0;
    double far_unexplored_weight = 1.5;  // frontier pull past the camera range
    double straight_bonus = 0.25;        // hysteresis toward the current heading
    double near_penalty = 0.75;
    double blocking_penalty = 3.0;
};

LatentFeatures encode_features(const ObservationBundle& bundle,
                               const OccupancyGrid& grid, const Arena& arena,
                               const std::optional<SemanticDescriptors>& prev,
                               const std::optional<FuzzyLabelSet>& prev_labels,
                               const CellSet* overlay = nullptr);

ProtoPrompt render_proto_prompt(const LatentFeatures& features,
                                const BackendTuning& tuning = {});

StructuredPrompt assemble_prompt(const ProtoPrompt& proto,
                                 const ObservationBundle& bundle,
                                 const OccupancyGrid& grid,
                                 const std::optional<SemanticDescriptors>& prev,
                                 const GoalSpec& goal, const LatentFeatures& features);

class SemanticBackend {
public:
    struct Result {
        SemanticDescriptors descriptors;
        FuzzyLabelSet labels;
        bool fallback_used = false;
    };

    virtual ~SemanticBackend() = default;
    virtual Result infer(const StructuredPrompt& prompt) = 0;
    virtual std::string name() const = 0;
};

// Deterministic replacement for the remote model: a documented decision
// table from features to descriptors and labels.
class HeuristicBackend : public SemanticBackend {
public:
    HeuristicBackend() = default;
    explicit HeuristicBackend(BackendTuning tuning) : tuning_(tuning) {}

    Result infer(const StructuredPrompt& prompt) override;
    std::string name() const override { return "heuristic"; }

    const BackendTuning& tuning() const { return tuning_; }

private:
    BackendTuning tuning_;
};

struct RemoteConfig {
    std::string endpoint;          // e.g. http://host:port/v1/labels
    std::string model = "gpt-4o";
    double temperature = 0.1;
    int max_tokens = 300;
    double timeout_s = 2.0;        // wall clock; simulated time is not charged
    std::string api_key_env = "REEFCOVER_API_KEY";
};

// Posts the serialized prompt to a remote endpoint and parses the four
// labels from the JSON response. Any timeout or schema violation falls back
// to the heuristic backend; fallbacks are counted, never fatal.
class RemoteBackend : public SemanticBackend {
public:
    explicit RemoteBackend(RemoteConfig config, BackendTuning tuning = {});

    Result infer(const StructuredPrompt& prompt) override;
    std::string name() const override { return "remote"; }

    int fallback_count() const { return fallback_count_; }

private:
    RemoteConfig config_;
    HeuristicBackend fallback_;
    int fallback_count_ = 0;
};

std::pair<SemanticDescriptors, FuzzyLabelSet> infer_semantics(
    const StructuredPrompt& prompt, SemanticBackend& backend);

// One-step-per-query ordinal clamp toward the proposal; recovery transitions
// are exempt at the call site.
FuzzyLabelSet continuity_guard(const FuzzyLabelSet& current,
                               const FuzzyLabelSet& previous);

FuzzyLabelSet recovery_labels();
bool is_recovery(const FuzzyLabelSet& labels);

}  // namespace reefcover::semantics
