#include "fedil/metrics.hpp"

#include <limits>
#include <stdexcept>

namespace fedil {

double collision_ratio(int64_t n_collided, int64_t n_spawned) {
    if (n_spawned <= 0) throw std::domain_error("collision ratio undefined without spawned vehicles");
    return double(n_collided) / double(n_spawned);
}

double average_speed(const std::vector<CompletedVehicle>& completed, const SimConfig& cfg) {
    if (completed.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (const auto& c : completed) {
        const double travel_s = double(c.exit_step - c.spawn_step) * cfg.dt;
        sum += cfg.lane_length / travel_s;
    }
    return sum / double(completed.size());
}

double average_discomfort(const std::vector<CompletedVehicle>& completed) {
    if (completed.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (const auto& c : completed) sum += c.sum_sq_jerk;
    return sum / double(completed.size());
}

IndicatorSet indicators_from_log(const EpisodeLog& log, const SimConfig& cfg) {
    IndicatorSet out;
    out.n_spawned = log.n_spawned;
    out.n_completed = int64_t(log.completed.size());
    out.n_collided = log.n_collided;
    out.collision_ratio = collision_ratio(log.n_collided, log.n_spawned);
    out.v_avg = average_speed(log.completed, cfg);
    out.discomfort = average_discomfort(log.completed);
    return out;
}

}  // namespace fedil
