#include "fedil/cyber_lane.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedil {

std::vector<CyberProjection> project(const std::vector<VehicleState>& vehicles) {
    std::vector<CyberProjection> out;
    out.reserve(vehicles.size());
    for (const auto& veh : vehicles) {
        CyberProjection p;
        p.vehicle_id = veh.id;
        p.cyber_pos = veh.x_long;
        p.source_lane = veh.lane;
        p.v = veh.v;
        p.a = veh.a;
        out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const CyberProjection& a, const CyberProjection& b) {
        if (a.cyber_pos != b.cyber_pos) return a.cyber_pos < b.cyber_pos;
        return a.vehicle_id < b.vehicle_id;
    });
    return out;
}

double norm_pos(double x, const SimConfig& cfg) { return x / cfg.lane_length; }
double norm_vel(double v, const SimConfig& cfg) { return v / cfg.v_max; }
double norm_acc(double a, const SimConfig& cfg) { return a / cfg.a_max; }
double denorm_pos(double u, const SimConfig& cfg) { return u * cfg.lane_length; }
double denorm_vel(double u, const SimConfig& cfg) { return u * cfg.v_max; }
double denorm_acc(double u, const SimConfig& cfg) { return u * cfg.a_max; }

double norm_gap(double eff, bool front, const SimConfig& cfg) {
    const double raw = std::log(std::max(eff, 1e-12) / cfg.gap_code_ref) / cfg.gap_code_span;
    const double code = (std::clamp(raw, -1.0, 1.0) + 1.0) / 2.0;
    const double proximity = 1.0 - code;
    return front ? -proximity : proximity;
}

EgoView make_ego_view(const std::vector<CyberProjection>& sorted_projection,
                      int64_t ego_id, const SimConfig& cfg) {
    size_t ego_idx = sorted_projection.size();
    for (size_t i = 0; i < sorted_projection.size(); ++i) {
        if (sorted_projection[i].vehicle_id == ego_id) {
            ego_idx = i;
            break;
        }
    }
    if (ego_idx == sorted_projection.size())
        throw std::invalid_argument("ego vehicle not in projection");
    const CyberProjection& ego = sorted_projection[ego_idx];

    // Effective gap to every other vehicle. The sort order already encodes
    // who is in front (smaller cyber_pos, ties by lower id).
    struct Ranked {
        double eff;
        int64_t id;
        size_t idx;
        bool front;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(sorted_projection.size() - 1);
    for (size_t i = 0; i < sorted_projection.size(); ++i) {
        if (i == ego_idx) continue;
        const CyberProjection& nb = sorted_projection[i];
        double eff = std::abs(nb.cyber_pos - ego.cyber_pos);
        if (nb.source_lane != ego.source_lane) {
            const double nearer = std::max(0.0, std::min(nb.cyber_pos, ego.cyber_pos));
            eff += cfg.cyber_gap_relief * nearer * nearer / cfg.lane_length;
        }
        ranked.push_back({eff, nb.vehicle_id, i, i < ego_idx});
    }

    EgoView view;
    NeighborCues& cues = view.cues;
    cues.d_front = cfg.lane_length;
    cues.d_behind = cfg.lane_length;
    const CyberProjection* front_veh = nullptr;
    const CyberProjection* behind_veh = nullptr;
    for (const Ranked& r : ranked) {
        if (r.front && r.eff < cues.d_front) {
            cues.d_front = r.eff;
            front_veh = &sorted_projection[r.idx];
        } else if (!r.front && r.eff < cues.d_behind) {
            cues.d_behind = r.eff;
            behind_veh = &sorted_projection[r.idx];
        }
    }
    cues.acc_front = front_veh ? front_veh->a : 0.0;
    cues.closing_front = front_veh ? ego.v - front_veh->v : 0.0;
    cues.closing_behind = behind_veh ? behind_veh->v - ego.v : 0.0;

    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.eff != b.eff) return a.eff < b.eff;
        return a.id < b.id;
    });

    auto& s = view.state.values;
    s[0] = norm_pos(ego.cyber_pos, cfg);
    s[1] = norm_vel(ego.v, cfg);
    s[2] = norm_acc(ego.a, cfg);
    for (int k = 0; k < kNeighborCount; ++k) {
        const size_t base = 3 + 3 * static_cast<size_t>(k);
        if (static_cast<size_t>(k) < ranked.size()) {
            const Ranked& r = ranked[size_t(k)];
            const CyberProjection& nb = sorted_projection[r.idx];
            s[base + 0] = norm_gap(r.eff, r.front, cfg);
            s[base + 1] = norm_vel(nb.v, cfg);
            s[base + 2] = norm_acc(nb.a, cfg);
        } else {
            s[base + 0] = 0.0;  // absent neighbor: zero proximity, at rest
            s[base + 1] = 0.0;
            s[base + 2] = 0.0;
        }
    }
    return view;
}

}  // namespace fedil
