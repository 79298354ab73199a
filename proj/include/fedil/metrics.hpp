#pragma once

#include "fedil/episode.hpp"

namespace fedil {

// Episode-level indicators. Collided vehicles count against collision_ratio
// and are excluded from the speed and discomfort averages; vehicles still
// on the road when the episode ends are excluded from all three.
struct IndicatorSet {
    double collision_ratio = 0.0;  // collided vehicles / spawned vehicles
    double v_avg = 0.0;            // mean of lane_length / travel_time, m/s
    double discomfort = 0.0;       // mean accumulated squared jerk per vehicle
    int64_t n_spawned = 0;
    int64_t n_completed = 0;
    int64_t n_collided = 0;
};

// Throws if the log has no spawned vehicles (ratio undefined). v_avg and
// discomfort are NaN when no vehicle completed the full approach.
IndicatorSet indicators_from_log(const EpisodeLog& log, const SimConfig& cfg);

double collision_ratio(int64_t n_collided, int64_t n_spawned);
double average_speed(const std::vector<CompletedVehicle>& completed, const SimConfig& cfg);
double average_discomfort(const std::vector<CompletedVehicle>& completed);

}  // namespace fedil
