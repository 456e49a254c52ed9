#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reefcover/semantics.hpp"
#include "reefcover/world.hpp"

namespace reefcover::comms {

using semantics::GoalSpec;
using semantics::SemanticDescriptors;
using world::CellIndex;
using world::CellSet;
using world::OccupancyGrid;
using world::Pose;

// Arena-frame claim sectors; +y is north.
enum class Compass { north, east, south, west };

std::string_view to_string(Compass c);
Compass compass_of_angle(double angle);

// Run-length coded visited-cell set at grid resolution: runs of consecutive
// i-cells within one j-row, sorted by (j, i0). Lossless.
struct ExploredDigest {
    struct Run {
        int j = 0;
        int i0 = 0;
        int len = 0;
        auto operator<=>(const Run&) const = default;
    };
    std::vector<Run> runs;

    static ExploredDigest encode(const CellSet& cells);
    CellSet decode() const;
    std::string to_string() const;
};

struct SemanticMessage {
    int robot_id = 0;
    std::int64_t round = 0;
    std::vector<std::string> tokens;  // canonical renderings, <= budget
    double qx = 0.0, qy = 0.0, qtheta = 0.0;  // quantized pose summary
    ExploredDigest digest;
    Compass claim = Compass::north;
    std::string goal_tag;
};

struct ChannelModel {
    int round_period = 2;   // communication rounds every this many queries
    int token_budget = 6;   // d
    double loss_prob = 0.0;
    std::uint64_t seed = 0;
};

struct SharedSemanticMap {
    struct Claim {
        Compass sector = Compass::north;
        std::int64_t round = -1;
    };
    struct PeerFix {
        double x = 0.0;
        double y = 0.0;
        std::int64_t round = -1;
    };
    std::map<int, Claim> peer_claims;
    std::map<int, PeerFix> peer_positions;
    CellSet peer_explored;
    std::map<int, std::int64_t> last_round_seen;
};

struct PolicyAdjustment {
    std::map<Compass, double> sector_bias;
    std::map<int, SharedSemanticMap::PeerFix> peer_positions;  // unexpired only
    CellSet extra_visited;
};

// Token priority: intent first, then per-sector obstacle facts, then
// per-sector exploration facts, truncated to the budget.
SemanticMessage encode_message(const SemanticDescriptors& descriptors,
                               const OccupancyGrid& grid, const Pose& pose,
                               const GoalSpec& goal, int budget, int robot_id,
                               std::int64_t round);

struct Delivery {
    int from = 0;
    int to = 0;
    bool delivered = false;
};

// Independent per-pair delivery with probability 1 - loss_prob, derived
// statelessly from (seed, round, from, to); a robot never receives its own
// message.
std::vector<Delivery> transmit(const ChannelModel& channel,
                               const std::vector<SemanticMessage>& messages,
                               std::int64_t round);

// Newest-round-wins merge; malformed messages are skipped and counted.
int decode_merge(const std::vector<SemanticMessage>& received, SharedSemanticMap& map);

// Peer-claimed sectors are penalized; same-sector same-round conflicts are
// kept by the lower robot id. Claims older than expire_rounds rounds are
// ignored.
PolicyAdjustment integrate_policy(std::optional<Compass> own_claim,
                                  std::int64_t own_round, const SharedSemanticMap& map,
                                  int self_id, double claim_penalty,
                                  std::int64_t current_round, int expire_rounds);

// Claimed arena direction implied by the recommended heading at this pose.
Compass claim_from_heading(const SemanticDescriptors& descriptors, const Pose& pose);

}  // namespace reefcover::comms
