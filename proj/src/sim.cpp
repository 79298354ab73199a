#include "fedil/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedil {

double step_kinematics(VehicleState& veh, double a_cmd, const SimConfig& cfg) {
    const double a = std::clamp(a_cmd, cfg.a_min, cfg.a_max);
    const double v_old = veh.v;
    veh.x_long -= v_old * cfg.dt + 0.5 * a * cfg.dt * cfg.dt;
    veh.v = std::clamp(v_old + a * cfg.dt, cfg.v_min, cfg.v_max);
    const double a_eff = (veh.v - v_old) / cfg.dt;
    const double jerk = (a_eff - veh.a) / cfg.dt;
    veh.sum_sq_jerk += jerk * jerk;
    veh.a = a_eff;
    return a_eff;
}

int sample_arrivals(std::mt19937_64& rng, double rate_veh_per_hour, double dt) {
    if (rate_veh_per_hour < 0.0) throw std::invalid_argument("arrival rate must be >= 0");
    const double mean = rate_veh_per_hour / 3600.0 * dt;
    if (mean == 0.0) return 0;
    std::poisson_distribution<int> dist(mean);
    return dist(rng);
}

bool entry_clear(const WorldState& world, int lane, const SimConfig& cfg) {
    const double limit = cfg.lane_length - cfg.vehicle_size - cfg.min_spawn_gap;
    int occupancy = 0;
    for (const auto& veh : world.vehicles) {
        if (veh.lane != lane) continue;
        if (veh.x_long > limit) return false;
        if (++occupancy >= cfg.entry_occupancy_cap) return false;
    }
    return true;
}

VehicleState& spawn_vehicle(WorldState& world, int lane, const SimConfig& cfg) {
    VehicleState veh;
    veh.id = world.next_id++;
    veh.lane = lane;
    veh.x_long = cfg.lane_length;
    veh.v = cfg.v_init;
    veh.a = 0.0;
    veh.spawn_step = world.step;
    world.vehicles.push_back(veh);
    ++world.n_spawned;
    return world.vehicles.back();
}

void detect_collisions(WorldState& world, const SimConfig& cfg) {
    const auto& vs = world.vehicles;
    const double conflict_halfwidth = cfg.vehicle_size / 2.0 + cfg.conflict_margin;
    std::vector<bool> hit(vs.size(), false);
    for (size_t i = 0; i < vs.size(); ++i) {
        for (size_t j = i + 1; j < vs.size(); ++j) {
            bool collided;
            bool same_lane = vs[i].lane == vs[j].lane;
            if (same_lane) {
                collided = std::abs(vs[i].x_long - vs[j].x_long) < cfg.vehicle_size;
            } else {
                collided = std::abs(vs[i].x_long) < conflict_halfwidth &&
                           std::abs(vs[j].x_long) < conflict_halfwidth;
            }
            if (collided) {
                hit[i] = true;
                hit[j] = true;
                CollisionEvent ev;
                ev.step = world.step;
                ev.id_a = std::min(vs[i].id, vs[j].id);
                ev.id_b = std::max(vs[i].id, vs[j].id);
                ev.same_lane = same_lane;
                world.collisions.push_back(ev);
            }
        }
    }
    size_t out = 0;
    for (size_t i = 0; i < vs.size(); ++i) {
        if (hit[i]) {
            ++world.n_collided;
        } else {
            world.vehicles[out++] = vs[i];
        }
    }
    world.vehicles.resize(out);
}

void retire_vehicles(WorldState& world) {
    size_t out = 0;
    for (auto& veh : world.vehicles) {
        if (veh.x_long <= 0.0) {
            CompletedVehicle done;
            done.id = veh.id;
            done.lane = veh.lane;
            done.spawn_step = veh.spawn_step;
            done.exit_step = world.step + 1;
            done.sum_sq_jerk = veh.sum_sq_jerk;
            world.completed.push_back(done);
        } else {
            world.vehicles[out++] = veh;
        }
    }
    world.vehicles.resize(out);
}

}  // namespace fedil
