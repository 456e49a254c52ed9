#include "reefcover/comms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reefcover/rng.hpp"

namespace reefcover::comms {

using semantics::ExploreLevel;
using semantics::HeadingRec;
using semantics::ObstacleLevel;
using semantics::OoiLevel;

std::string_view to_string(Compass c) {
    switch (c) {
        case Compass::north: return "north";
        case Compass::east: return "east";
        case Compass::south: return "south";
        case Compass::west: return "west";
    }
    return "?";
}

Compass compass_of_angle(double angle) {
    const double a = geometry::normalize_angle(angle);
    if (a >= M_PI / 4.0 && a < 3.0 * M_PI / 4.0) return Compass::north;
    if (a >= -M_PI / 4.0 && a < M_PI / 4.0) return Compass::east;
    if (a >= -3.0 * M_PI / 4.0 && a < -M_PI / 4.0) return Compass::south;
    return Compass::west;
}

ExploredDigest ExploredDigest::encode(const CellSet& cells) {
    ExploredDigest digest;
    // CellSet orders by (i, j); regroup row-major by (j, i).
    std::vector<CellIndex> sorted(cells.begin(), cells.end());
    std::sort(sorted.begin(), sorted.end(), [](CellIndex a, CellIndex b) {
        return a.j != b.j ? a.j < b.j : a.i < b.i;
    });
    for (const CellIndex& c : sorted) {
        if (!digest.runs.empty() && digest.runs.back().j == c.j &&
            digest.runs.back().i0 + digest.runs.back().len == c.i) {
            ++digest.runs.back().len;
        } else {
            digest.runs.push_back({c.j, c.i, 1});
        }
    }
    return digest;
}

CellSet ExploredDigest::decode() const {
    CellSet cells;
    for (const Run& run : runs)
        for (int k = 0; k < run.len; ++k) cells.insert({run.i0 + k, run.j});
    return cells;
}

std::string ExploredDigest::to_string() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        if (k) out << ";";
        out << runs[k].j << ":" << runs[k].i0 << "+" << runs[k].len;
    }
    return out.str();
}

namespace {

constexpr std::array<const char*, 3> kSectorWord = {"Left", "Front", "Right"};

std::string_view obstacle_word(ObstacleLevel v) {
    switch (v) {
        case ObstacleLevel::clear: return "clear";
        case ObstacleLevel::near: return "partially blocked";
        case ObstacleLevel::blocking: return "blocked";
    }
    return "?";
}

std::string_view explore_word(ExploreLevel v) {
    switch (v) {
        case ExploreLevel::visited: return "fully explored";
        case ExploreLevel::partial: return "partially explored";
        case ExploreLevel::unexplored: return "unexplored";
    }
    return "?";
}

int heading_sector(HeadingRec rec) {
    switch (rec) {
        case HeadingRec::hard_left:
        case HeadingRec::left: return 0;
        case HeadingRec::right:
        case HeadingRec::hard_right: return 2;
        default: return 1;
    }
}

double heading_offset(HeadingRec rec) {
    switch (rec) {
        case HeadingRec::hard_left: return -0.5;
        case HeadingRec::left: return -0.25;
        case HeadingRec::straight: return 0.0;
        case HeadingRec::right: return 0.25;
        case HeadingRec::hard_right: return 0.5;
        case HeadingRec::rotate_in_place: return 0.0;
    }
    return 0.0;
}

}  // namespace

Compass claim_from_heading(const SemanticDescriptors& descriptors, const Pose& pose) {
    return compass_of_angle(pose.theta + heading_offset(descriptors.recommended_heading));
}

SemanticMessage encode_message(const SemanticDescriptors& descriptors,
                               const OccupancyGrid& grid, const Pose& pose,
                               const GoalSpec& goal, int budget, int robot_id,
                               std::int64_t round) {
    SemanticMessage msg;
    msg.robot_id = robot_id;
    msg.round = round;
    msg.qx = std::round(pose.x * 10.0) / 10.0;
    msg.qy = std::round(pose.y * 10.0) / 10.0;
    msg.qtheta = std::round(pose.theta * 100.0) / 100.0;
    msg.digest = ExploredDigest::encode(grid.cells());
    msg.claim = claim_from_heading(descriptors, pose);
    msg.goal_tag = goal.maximize_coverage ? "coverage" : "hold";

    const int sector = heading_sector(descriptors.recommended_heading);
    const auto target_kind = [&]() -> std::string_view {
        if (descriptors.exploration_summary[static_cast<std::size_t>(sector)] !=
            ExploreLevel::visited)
            return "unexplored";
        if (descriptors.ooi_summary[static_cast<std::size_t>(sector)] != OoiLevel::none)
            return "OOI-dense";
        return "unexplored";
    };
    std::vector<std::string> candidates;
    {
        std::ostringstream intent;
        intent << kSectorWord[static_cast<std::size_t>(sector)] << " area "
               << obstacle_word(
                      descriptors.obstacle_summary[static_cast<std::size_t>(sector)])
               << ", moving " << to_string(msg.claim) << " toward " << target_kind()
               << " region";
        candidates.push_back(intent.str());
    }
    for (std::size_t s = 0; s < 3; ++s) {
        std::ostringstream fact;
        fact << kSectorWord[s] << " area " << obstacle_word(descriptors.obstacle_summary[s]);
        candidates.push_back(fact.str());
    }
    for (std::size_t s = 0; s < 3; ++s) {
        std::ostringstream fact;
        fact << kSectorWord[s] << " area " << explore_word(descriptors.exploration_summary[s]);
        candidates.push_back(fact.str());
    }
    const std::size_t keep =
        std::min<std::size_t>(candidates.size(), budget < 1 ? 1 : static_cast<std::size_t>(budget));
    msg.tokens.assign(candidates.begin(), candidates.begin() + static_cast<long>(keep));
    return msg;
}

std::vector<Delivery> transmit(const ChannelModel& channel,
                               const std::vector<SemanticMessage>& messages,
                               std::int64_t round) {
    std::vector<Delivery> out;
    for (const SemanticMessage& msg : messages) {
        for (const SemanticMessage& peer : messages) {
            if (peer.robot_id == msg.robot_id) continue;
            Delivery d;
            d.from = msg.robot_id;
            d.to = peer.robot_id;
            d.delivered = rng::event_coin(channel.seed, static_cast<std::uint64_t>(round),
                                          static_cast<std::uint64_t>(msg.robot_id),
                                          static_cast<std::uint64_t>(peer.robot_id),
                                          1.0 - channel.loss_prob);
            out.push_back(d);
        }
    }
    return out;
}

int decode_merge(const std::vector<SemanticMessage>& received, SharedSemanticMap& map) {
    int skipped = 0;
    for (const SemanticMessage& msg : received) {
        bool malformed = msg.round < 0 || msg.robot_id < 0;
        for (const auto& run : msg.digest.runs)
            if (run.len <= 0) malformed = true;
        if (malformed) {
            ++skipped;
            continue;
        }
        auto& claim = map.peer_claims[msg.robot_id];
        if (msg.round >= claim.round) claim = {msg.claim, msg.round};
        auto& fix = map.peer_positions[msg.robot_id];
        if (msg.round >= fix.round) fix = {msg.qx, msg.qy, msg.round};
        auto& seen = map.last_round_seen[msg.robot_id];
        seen = std::max(seen, msg.round);
        const CellSet cells = msg.digest.decode();
        map.peer_explored.insert(cells.begin(), cells.end());
    }
    return skipped;
}

PolicyAdjustment integrate_policy(std::optional<Compass> own_claim,
                                  std::int64_t own_round, const SharedSemanticMap& map,
                                  int self_id, double claim_penalty,
                                  std::int64_t current_round, int expire_rounds) {
    PolicyAdjustment adj;
    adj.extra_visited = map.peer_explored;
    for (const auto& [peer_id, claim] : map.peer_claims) {
        if (peer_id == self_id) continue;
        if (claim.round < current_round - expire_rounds) continue;  // stale
        if (own_claim && claim.sector == *own_claim && claim.round == own_round &&
            self_id < peer_id)
            continue;  // conflict resolved in our favor
        adj.sector_bias[claim.sector] += claim_penalty;
    }
    for (const auto& [peer_id, fix] : map.peer_positions) {
        if (peer_id == self_id) continue;
        if (fix.round < current_round - expire_rounds) continue;
        adj.peer_positions[peer_id] = fix;
    }
    return adj;
}

}  // namespace reefcover::comms
