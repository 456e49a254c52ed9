#include "reefcover/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace reefcover::semantics {

std::string_view to_string(ObstacleLevel v) {
    switch (v) {
        case ObstacleLevel::clear: return "clear";
        case ObstacleLevel::near: return "near";
        case ObstacleLevel::blocking: return "blocking";
    }
    return "?";
}

std::string_view to_string(OoiLevel v) {
    switch (v) {
        case OoiLevel::none: return "none";
        case OoiLevel::sparse: return "sparse";
        case OoiLevel::dense: return "dense";
    }
    return "?";
}

std::string_view to_string(ExploreLevel v) {
    switch (v) {
        case ExploreLevel::visited: return "visited";
        case ExploreLevel::partial: return "partial";
        case ExploreLevel::unexplored: return "unexplored";
    }
    return "?";
}

std::string_view to_string(HeadingRec v) {
    switch (v) {
        case HeadingRec::hard_left: return "hard_left";
        case HeadingRec::left: return "left";
        case HeadingRec::straight: return "straight";
        case HeadingRec::right: return "right";
        case HeadingRec::hard_right: return "hard_right";
        case HeadingRec::rotate_in_place: return "rotate_in_place";
    }
    return "?";
}

std::string ProtoPrompt::joined() const {
    std::string out;
    for (const std::string& s : sentences) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

std::string GoalSpec::to_string() const {
    std::string out;
    if (maximize_coverage) out += "maximize coverage of OOI-dense regions";
    if (minimize_revisit) {
        if (!out.empty()) out += "; ";
        out += "minimize revisits of explored cells";
    }
    return out.empty() ? "hold position" : out;
}

namespace {

ObstacleLevel obstacle_level(double distance, const BackendTuning& t) {
    if (distance <= t.obstacle_blocking) return ObstacleLevel::blocking;
    if (distance <= t.obstacle_near) return ObstacleLevel::near;
    return ObstacleLevel::clear;
}

OoiLevel ooi_level(int count, const BackendTuning& t) {
    if (count <= 0) return OoiLevel::none;
    if (count >= t.ooi_dense) return OoiLevel::dense;
    return OoiLevel::sparse;
}

ExploreLevel explore_level(double unexplored_fraction, const BackendTuning& t) {
    if (unexplored_fraction >= t.explored_unexplored) return ExploreLevel::unexplored;
    if (unexplored_fraction <= t.explored_visited) return ExploreLevel::visited;
    return ExploreLevel::partial;
}

SemanticDescriptors summarize_descriptors(const LatentFeatures& f,
                                          const BackendTuning& t) {
    SemanticDescriptors d;
    for (std::size_t s = 0; s < 3; ++s) {
        d.obstacle_summary[s] = obstacle_level(f.sector_stats.nearest_obstacle[s], t);
        d.ooi_summary[s] = ooi_level(f.sector_stats.ooi_count[s], t);
        d.exploration_summary[s] = explore_level(f.sector_stats.unexplored_fraction[s], t);
    }
    return d;
}

constexpr std::array<const char*, 3> kSectorPhrase = {"on the left", "ahead",
                                                      "on the right"};
constexpr std::array<const char*, 3> kSectorWord = {"Left", "Front", "Right"};

std::string exploration_word(ExploreLevel v) {
    switch (v) {
        case ExploreLevel::visited: return "explored";
        case ExploreLevel::partial: return "partially explored";
        case ExploreLevel::unexplored: return "unexplored";
    }
    return "?";
}

}  // namespace

LatentFeatures encode_features(const ObservationBundle& bundle,
                               const OccupancyGrid& grid, const Arena& arena,
                               const std::optional<SemanticDescriptors>& prev,
                               const std::optional<FuzzyLabelSet>& prev_labels,
                               const CellSet* overlay) {
    (void)prev;
    LatentFeatures f;
    f.sector_stats = sensing::summarize(bundle, grid, arena, overlay);
    f.heading = bundle.pose.theta;
    f.previous_labels = prev_labels;

    f.min_obstacle_distance = bundle.radar.radius;
    for (const auto& d : bundle.radar.sector_distance)
        if (d) f.min_obstacle_distance = std::min(f.min_obstacle_distance, *d);

    const double r = grid.resolution;
    const auto nx = static_cast<std::size_t>(std::ceil(arena.width / r));
    const auto ny = static_cast<std::size_t>(std::ceil(arena.height / r));
    CellSet seen = grid.cells();
    if (overlay) seen.insert(overlay->begin(), overlay->end());
    std::size_t in_arena = 0;
    for (const auto& c : seen)
        if (c.i >= 0 && c.j >= 0 && c.i < static_cast<int>(nx) &&
            c.j < static_cast<int>(ny))
            ++in_arena;
    f.visited_fraction_global =
        nx * ny > 0 ? static_cast<double>(in_arena) / static_cast<double>(nx * ny) : 0.0;
    return f;
}

ProtoPrompt render_proto_prompt(const LatentFeatures& f, const BackendTuning& t) {
    const SemanticDescriptors d = summarize_descriptors(f, t);
    ProtoPrompt proto;

    // Sentence 1: front exploration state plus obstacle clauses.
    std::string s1 = "Front area " + exploration_word(d.exploration_summary[1]);
    bool any_obstacle = false;
    for (std::size_t s = 0; s < 3; ++s) {
        if (d.obstacle_summary[s] == ObstacleLevel::clear) continue;
        any_obstacle = true;
        s1 += "; ";
        s1 += d.obstacle_summary[s] == ObstacleLevel::blocking ? "dense obstacles "
                                                               : "obstacles ";
        s1 += kSectorPhrase[s];
    }
    if (!any_obstacle) s1 += "; no obstacles detected";
    s1 += ".";
    proto.sentences.push_back(s1);

    // Sentence 2: OOI distribution.
    std::string s2;
    for (std::size_t s = 0; s < 3; ++s) {
        if (d.ooi_summary[s] == OoiLevel::none) continue;
        if (!s2.empty()) s2 += "; ";
        s2 += d.ooi_summary[s] == OoiLevel::dense ? "dense OOIs " : "sparse OOIs ";
        s2 += kSectorPhrase[s];
    }
    if (s2.empty()) s2 = "no OOIs visible";
    s2[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s2[0])));
    proto.sentences.push_back(s2 + ".");

    // Sentence 3: side exploration state.
    proto.sentences.push_back("Left area " + exploration_word(d.exploration_summary[0]) +
                              "; right area " +
                              exploration_word(d.exploration_summary[2]) + ".");
    return proto;
}

StructuredPrompt assemble_prompt(const ProtoPrompt& proto,
                                 const ObservationBundle& bundle,
                                 const OccupancyGrid& grid,
                                 const std::optional<SemanticDescriptors>& prev,
                                 const GoalSpec& goal,
                                 const LatentFeatures& features) {
    StructuredPrompt p;
    p.proto = proto;
    p.features = features;

    std::ostringstream grounding;
    grounding << "detections=" << bundle.view.detections.size();
    grounding << " ooi_counts=" << features.sector_stats.ooi_count[0] << "/"
              << features.sector_stats.ooi_count[1] << "/"
              << features.sector_stats.ooi_count[2];
    char buf[64];
    std::snprintf(buf, sizeof buf, " min_obstacle=%.3f", features.min_obstacle_distance);
    grounding << buf;
    std::snprintf(buf, sizeof buf, " visited_cells=%zu", grid.cell_count());
    grounding << buf;
    p.grounding_digest = grounding.str();

    if (prev) {
        std::ostringstream cont;
        cont << "previous heading " << to_string(prev->recommended_heading);
        if (features.previous_labels)
            cont << "; previous labels " << features.previous_labels->to_string();
        p.continuity_ref = cont.str();
    } else {
        p.continuity_ref = "no previous state";
    }
    p.goal = goal.to_string();
    return p;
}

std::string StructuredPrompt::serialize() const {
    std::string out = "Observation summary:\n";
    for (const std::string& s : proto.sentences) out += "  " + s + "\n";
    out += "Environmental grounding: " + grounding_digest + "\n";
    out += "Behavioral continuity: " + continuity_ref + "\n";
    out += "Goal alignment: " + goal + "\n";
    out +=
        "Respond with four fuzzy labels: moment, moment_change in {NB,NM,ZO,PM,PB}; "
        "force in {ZO,PS,PM,PB}; force_change in {NB,NM,ZO,PM,PB}.\n";
    return out;
}

namespace {

Term signed_term_at(int index) {
    return labels::kSignedTerms[static_cast<std::size_t>(std::clamp(index, 0, 4))];
}
Term force_term_at(int index) {
    return labels::kForceTerms[static_cast<std::size_t>(std::clamp(index, 0, 3))];
}

Term change_term(int diff) {
    // Ordinal difference mapped onto the NB..PB change scale.
    return signed_term_at(std::clamp(diff, -2, 2) + 2);
}

}  // namespace

SemanticBackend::Result HeuristicBackend::infer(const StructuredPrompt& prompt) {
    const LatentFeatures& f = prompt.features;
    Result res;
    res.descriptors = summarize_descriptors(f, tuning_);

    const auto& stats = f.sector_stats;
    const int total = stats.ooi_count[0] + stats.ooi_count[1] + stats.ooi_count[2];
    if (total == 0) {
        res.descriptors.recommended_heading = HeadingRec::rotate_in_place;
        res.labels = recovery_labels();
        return res;
    }

    std::array<double, 3> score{};
    for (std::size_t s = 0; s < 3; ++s) {
        const double u = stats.unexplored_fraction[s];
        double pen = 0.0;
        if (res.descriptors.obstacle_summary[s] == ObstacleLevel::near)
            pen = tuning_.near_penalty;
        else if (res.descriptors.obstacle_summary[s] == ObstacleLevel::blocking)
            pen = tuning_.blocking_penalty;
        const double capped =
            std::min(stats.ooi_count[s], tuning_.ooi_count_cap);
        score[s] = tuning_.ooi_weight * capped *
                       (tuning_.ooi_visited_discount +
                        (1.0 - tuning_.ooi_visited_discount) * u) +
                   tuning_.unexplored_weight * u +
                   tuning_.far_unexplored_weight * stats.unexplored_fraction_far[s] -
                   pen - f.sector_bias[s];
        if (s == 1) score[s] += tuning_.straight_bonus;
    }

    constexpr double kEps = 1e-9;
    const bool center_blocked =
        res.descriptors.obstacle_summary[1] == ObstacleLevel::blocking;
    HeadingRec heading;
    std::size_t chosen;
    if (score[1] >= std::max(score[0], score[2]) - kEps) {
        heading = HeadingRec::straight;
        chosen = 1;
    } else if (std::abs(score[0] - score[2]) <= kEps) {
        heading = HeadingRec::straight;
        chosen = 1;
    } else if (score[0] > score[2]) {
        heading = center_blocked ? HeadingRec::hard_left : HeadingRec::left;
        chosen = 0;
    } else {
        heading = center_blocked ? HeadingRec::hard_right : HeadingRec::right;
        chosen = 2;
    }
    // Never drive into a blocked sector while an open one scores lower:
    // re-route to the best non-blocking sector, or spin away if boxed in.
    if (res.descriptors.obstacle_summary[chosen] == ObstacleLevel::blocking) {
        int best = -1;
        for (std::size_t s = 0; s < 3; ++s) {
            if (res.descriptors.obstacle_summary[s] == ObstacleLevel::blocking) continue;
            if (best < 0 || score[s] > score[static_cast<std::size_t>(best)])
                best = static_cast<int>(s);
        }
        if (best < 0) {
            heading = HeadingRec::hard_right;
            chosen = 2;
        } else {
            chosen = static_cast<std::size_t>(best);
            heading = chosen == 1 ? HeadingRec::straight
                      : chosen == 0
                          ? (center_blocked ? HeadingRec::hard_left : HeadingRec::left)
                          : (center_blocked ? HeadingRec::hard_right : HeadingRec::right);
        }
    }
    res.descriptors.recommended_heading = heading;

    switch (heading) {
        case HeadingRec::hard_left: res.labels.moment = Term::NB; break;
        case HeadingRec::left: res.labels.moment = Term::NM; break;
        case HeadingRec::straight: res.labels.moment = Term::ZO; break;
        case HeadingRec::right: res.labels.moment = Term::PM; break;
        case HeadingRec::hard_right: res.labels.moment = Term::PB; break;
        case HeadingRec::rotate_in_place: res.labels.moment = Term::PB; break;
    }

    const ObstacleLevel chosen_level = res.descriptors.obstacle_summary[chosen];
    if (chosen_level == ObstacleLevel::blocking) {
        res.labels.force = Term::ZO;
    } else if (heading == HeadingRec::hard_left || heading == HeadingRec::hard_right) {
        res.labels.force = Term::PS;
    } else if (heading == HeadingRec::left || heading == HeadingRec::right) {
        res.labels.force = Term::PM;
    } else {
        res.labels.force =
            chosen_level == ObstacleLevel::clear ? Term::PB : Term::PM;
    }

    if (f.previous_labels && !is_recovery(*f.previous_labels)) {
        res.labels.moment_change =
            change_term(labels::signed_index(res.labels.moment) -
                        labels::signed_index(f.previous_labels->moment));
        res.labels.force_change =
            change_term(labels::force_index(res.labels.force) -
                        labels::force_index(f.previous_labels->force));
    } else {
        res.labels.moment_change = Term::ZO;
        res.labels.force_change = Term::ZO;
    }
    return res;
}

RemoteBackend::RemoteBackend(RemoteConfig config, BackendTuning tuning)
    : config_(std::move(config)), fallback_(tuning) {}

SemanticBackend::Result RemoteBackend::infer(const StructuredPrompt& prompt) {
    const auto fail = [&]() {
        ++fallback_count_;
        Result res = fallback_.infer(prompt);
        res.fallback_used = true;
        return res;
    };

    // Only plain http endpoints are supported in-process.
    std::string rest;
    if (config_.endpoint.rfind("http://", 0) == 0) {
        rest = config_.endpoint.substr(7);
    } else {
        return fail();
    }
    const std::size_t slash = rest.find('/');
    const std::string host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
    const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    std::string host = host_port;
    int port = 80;
    if (const std::size_t colon = host_port.find(':'); colon != std::string::npos) {
        host = host_port.substr(0, colon);
        port = std::atoi(host_port.c_str() + colon + 1);
    }

    httplib::Client client(host, port);
    client.set_connection_timeout(static_cast<time_t>(config_.timeout_s),
                                  static_cast<time_t>(config_.timeout_s * 1e6) % 1000000);
    client.set_read_timeout(static_cast<time_t>(config_.timeout_s),
                            static_cast<time_t>(config_.timeout_s * 1e6) % 1000000);

    nlohmann::json body;
    body["model"] = config_.model;
    body["temperature"] = config_.temperature;
    body["max_tokens"] = config_.max_tokens;
    body["prompt"] = prompt.serialize();

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    const auto response = client.Post(path, headers, body.dump(), "application/json");
    if (!response || response->status != 200) return fail();

    try {
        const auto j = nlohmann::json::parse(response->body);
        FuzzyLabelSet set;
        set.moment = labels::term_from_string(j.at("moment").get<std::string>());
        set.moment_change =
            labels::term_from_string(j.at("moment_change").get<std::string>());
        set.force = labels::term_from_string(j.at("force").get<std::string>());
        set.force_change =
            labels::term_from_string(j.at("force_change").get<std::string>());
        set.validate();

        Result res;
        res.labels = set;
        res.descriptors = summarize_descriptors(prompt.features, fallback_.tuning());
        if (j.contains("recommended_heading")) {
            const std::string h = j.at("recommended_heading").get<std::string>();
            for (const HeadingRec rec :
                 {HeadingRec::hard_left, HeadingRec::left, HeadingRec::straight,
                  HeadingRec::right, HeadingRec::hard_right, HeadingRec::rotate_in_place})
                if (h == to_string(rec)) res.descriptors.recommended_heading = rec;
        }
        return res;
    } catch (const std::exception&) {
        return fail();
    }
}

std::pair<SemanticDescriptors, FuzzyLabelSet> infer_semantics(
    const StructuredPrompt& prompt, SemanticBackend& backend) {
    const auto res = backend.infer(prompt);
    return {res.descriptors, res.labels};
}

FuzzyLabelSet continuity_guard(const FuzzyLabelSet& current,
                               const FuzzyLabelSet& previous) {
    const auto step_signed = [](Term prev, Term cur) {
        const int p = labels::signed_index(prev);
        const int c = labels::signed_index(cur);
        return signed_term_at(p + std::clamp(c - p, -1, 1));
    };
    const auto step_force = [](Term prev, Term cur) {
        const int p = labels::force_index(prev);
        const int c = labels::force_index(cur);
        return force_term_at(p + std::clamp(c - p, -1, 1));
    };
    FuzzyLabelSet out;
    out.moment = step_signed(previous.moment, current.moment);
    out.moment_change = step_signed(previous.moment_change, current.moment_change);
    out.force = step_force(previous.force, current.force);
    out.force_change = step_signed(previous.force_change, current.force_change);
    return out;
}

FuzzyLabelSet recovery_labels() {
    return {Term::PB, Term::ZO, Term::ZO, Term::ZO};
}

bool is_recovery(const FuzzyLabelSet& labels) { return labels == recovery_labels(); }

}  // namespace reefcover::semantics
