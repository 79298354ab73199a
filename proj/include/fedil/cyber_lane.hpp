#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fedil/sim.hpp"

namespace fedil {

// All approaches share one conflict point, so vehicles from different lanes
// are ordered on a single virtual lane by their distance-to-conflict. A
// vehicle's "front" neighbor is the one that reaches the conflict point
// sooner, regardless of physical lane.
struct CyberProjection {
    int64_t vehicle_id = -1;
    double cyber_pos = 0.0;  // == x_long
    int source_lane = 0;
    double v = 0.0;
    double a = 0.0;
};

inline constexpr int kNeighborCount = 5;
inline constexpr int kStateDim = 3 + 3 * kNeighborCount;

struct StateVector {
    std::array<double, kStateDim> values{};
};

// Gap cues for the rule policy, taken from the cyber-lane adjacency.
// Missing neighbors use sentinel distance = lane_length, closing 0,
// acceleration 0.
struct NeighborCues {
    double d_front = 0.0;
    double d_behind = 0.0;
    double acc_front = 0.0;
    double closing_front = 0.0;   // > 0 means the front gap is shrinking
    double closing_behind = 0.0;  // > 0 means the rear gap is shrinking
};

struct EgoView {
    StateVector state;
    NeighborCues cues;
};

// Projects live vehicles onto the cyber lane, sorted by ascending cyber_pos,
// ties broken by lower id.
std::vector<CyberProjection> project(const std::vector<VehicleState>& vehicles);

// Builds the ego's normalized state vector and gap cues from a sorted
// projection. Distances are effective cyber gaps: same-lane pairs use the
// raw gap, cross-lane pairs add cfg.cyber_gap_relief * nearer_pos^2 /
// lane_length so that spawn-area crowding across lanes is invisible while
// conflict-zone ordering stays strict. The state holds ego (pos, v, a)
// followed by the n nearest neighbors by effective gap (ties by id), each
// as (signed proximity, v, a); absent slots are (0, 0, 0). Throws if
// ego_id is not present.
EgoView make_ego_view(const std::vector<CyberProjection>& sorted_projection,
                      int64_t ego_id, const SimConfig& cfg);

// Normalization used by the state vector; invertible over valid ranges.
double norm_pos(double x, const SimConfig& cfg);
double norm_vel(double v, const SimConfig& cfg);
double norm_acc(double a, const SimConfig& cfg);
double denorm_pos(double u, const SimConfig& cfg);
double denorm_vel(double u, const SimConfig& cfg);
double denorm_acc(double u, const SimConfig& cfg);

// Signed log-proximity code for neighbor gaps: +/-1 at contact, ~0 one lane
// length away, 0 for an absent neighbor. Distance enters decisions through
// ratios to a ~10 m reference, so a linear /lane_length feature would crush
// the whole decision zone into a few percent of the feature range; the log
// code spends resolution where actions change. front=true yields negatives.
double norm_gap(double eff, bool front, const SimConfig& cfg);

}  // namespace fedil
