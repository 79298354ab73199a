#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fedil {

// Four-approach unsignalized intersection, longitudinal motion only.
// x_long is the distance remaining to the conflict point; vehicles enter at
// x_long == lane_length and retire once x_long <= 0.
struct SimConfig {
    int n_lanes = 4;
    double lane_length = 150.0;   // m
    double vehicle_size = 2.0;    // m
    double conflict_margin = 1.0; // m, extra slack around the conflict point
    double min_spawn_gap = 3.0;   // m, clearance behind the entry before a spawn
    // Cross-lane cyber gaps widen by relief * nearer_pos^2 / lane_length:
    // vehicles far from the conflict point do not crowd each other across
    // lanes, while the ordering near the conflict zone stays strict.
    double cyber_gap_relief = 0.2;
    // Arrivals defer while the lane already holds this many vehicles.
    // Vehicles cannot stop (v_min > 0), so the only way to keep the merge
    // solvable under overload is to meter entries; deferred arrivals stay
    // queued and enter as soon as the lane drains below the cap.
    int entry_occupancy_cap = 6;
    // Neighbor-gap feature code: ln(gap / ref) / span, clamped to [-1, 1].
    // ref sits where braking and escaping trade off; span covers ref*e^-3
    // (saturated close) to ref*e^3 (saturated far).
    double gap_code_ref = 10.0;   // m
    double gap_code_span = 3.0;
    double v_min = 6.0;           // m/s
    double v_max = 13.0;          // m/s
    double v_init = 10.0;         // m/s
    double a_min = -3.0;          // m/s^2
    double a_max = 3.0;           // m/s^2
    double dt = 0.1;              // s
    double arrival_rate = 900.0;  // veh/lane/h, Poisson
    int episode_steps = 2000;
    uint64_t seed = 1;
};

struct VehicleState {
    int64_t id = -1;
    int lane = 0;
    double x_long = 0.0;
    double v = 0.0;
    double a = 0.0;  // effective acceleration applied on the previous step
    int64_t spawn_step = 0;
    double sum_sq_jerk = 0.0;  // accumulated ((a_t - a_{t-1}) / dt)^2
};

struct CompletedVehicle {
    int64_t id = 0;
    int lane = 0;
    int64_t spawn_step = 0;
    int64_t exit_step = 0;  // travel time = (exit_step - spawn_step) * dt
    double sum_sq_jerk = 0.0;
};

struct CollisionEvent {
    int64_t step = 0;
    int64_t id_a = 0;  // id_a < id_b
    int64_t id_b = 0;
    bool same_lane = false;
};

struct WorldState {
    int64_t step = 0;
    std::vector<VehicleState> vehicles;  // spawn order
    std::vector<CompletedVehicle> completed;
    std::vector<CollisionEvent> collisions;
    std::vector<int> spawn_queue;  // deferred arrivals per lane
    int64_t n_spawned = 0;
    int64_t n_collided = 0;  // vehicles removed by collisions
    int64_t next_id = 0;
};

// One Euler step of x' = x - v*dt - 0.5*a*dt^2, v' = v + a*dt.
// a_cmd is clamped to [a_min, a_max] before integration; v is clamped to
// [v_min, v_max] afterwards. Returns the effective acceleration
// (v' - v) / dt actually realized, which feeds the jerk accumulator.
double step_kinematics(VehicleState& veh, double a_cmd, const SimConfig& cfg);

// Poisson arrival count for one lane and one step; mean = rate/3600 * dt.
int sample_arrivals(std::mt19937_64& rng, double rate_veh_per_hour, double dt);

// True when a lane can accept a spawn: no vehicle with
// x_long > lane_length - vehicle_size - min_spawn_gap, and fewer than
// entry_occupancy_cap vehicles already in the lane.
bool entry_clear(const WorldState& world, int lane, const SimConfig& cfg);

// Inserts a vehicle at x_long = lane_length with v = v_init, a = 0.
// Pre: entry_clear(world, lane, cfg).
VehicleState& spawn_vehicle(WorldState& world, int lane, const SimConfig& cfg);

// Same-lane pairs with |x_i - x_j| < vehicle_size collide; cross-lane pairs
// collide when both are inside the conflict zone
// (|x_long| < vehicle_size / 2 + conflict_margin). All colliding vehicles
// are removed in one pass; events are logged with id_a < id_b.
void detect_collisions(WorldState& world, const SimConfig& cfg);

// Moves vehicles with x_long <= 0 into world.completed with
// exit_step = world.step + 1 (they moved during steps spawn_step .. step).
void retire_vehicles(WorldState& world);

}  // namespace fedil
