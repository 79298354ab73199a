#include "fedil/safety_rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fedil {

double sv_space(double d, const RuleConfig& cfg) {
    if (d < 0.0) throw std::invalid_argument("gap must be >= 0");
    if (d == 0.0) return cfg.sv_min;
    return cfg.beta_space * std::log(d / cfg.alpha_space);
}

double sv_time(double ttc_seconds, const RuleConfig& cfg) {
    if (ttc_seconds <= 0.0) return cfg.sv_min;
    if (ttc_seconds < cfg.ttc_guard) {
        const double base = cfg.alpha_time / std::tanh(ttc_seconds / cfg.ttc_guard);
        return -std::pow(base, cfg.beta_time);
    }
    if (ttc_seconds < cfg.ttc_release) {
        // Linear bridge from the penalty curve's end to the full bonus; a
        // cliff here would let closing-speed noise around the guard swing
        // the whole safety value by several units each step.
        const double edge = -std::pow(cfg.alpha_time / std::tanh(1.0), cfg.beta_time);
        const double frac = (ttc_seconds - cfg.ttc_guard) / (cfg.ttc_release - cfg.ttc_guard);
        return edge + (2.0 - edge) * frac;
    }
    return 2.0;
}

double sv_accel(double acc_front, double d_front, const RuleConfig& cfg) {
    if (acc_front == 0.0) return 0.0;
    if (d_front < 0.0) throw std::invalid_argument("d_front must be >= 0");
    // Inside d_threshold the raw log flips sign and would reward closing on
    // a braking leader, so the factor is floored at zero there.
    const double ratio = std::min(d_front / cfg.d_threshold, cfg.alpha_acc);
    const double factor = std::max(std::log(ratio), 0.0);
    return cfg.lambda_acc * acc_front * cfg.beta_acc * factor;
}

double combine_sv(double space, double time, double accel, const RuleConfig& cfg) {
    const double sum = space + time + accel;
    if (std::isnan(sum)) throw std::domain_error("safety value is NaN");
    return std::clamp(sum, cfg.sv_min, cfg.sv_max);
}

double sv_to_action(double sv_front, double sv_rear, double front_risk, double rear_risk,
                    const RuleConfig& cfg) {
    const double a_brake = sv_front / cfg.eta;
    const double a_escape = std::abs(sv_rear / cfg.eta);
    const double w = std::clamp(
        (front_risk - rear_risk) / (2.0 * cfg.branch_band) + 0.5, 0.0, 1.0);
    return w * a_escape + (1.0 - w) * a_brake;
}

double rule_action(const NeighborCues& cues, const RuleConfig& cfg, SvBreakdown* breakdown) {
    const double inf = std::numeric_limits<double>::infinity();
    const double ttc_front = cues.closing_front > 0.0 ? cues.d_front / cues.closing_front : inf;
    const double ttc_behind = cues.closing_behind > 0.0 ? cues.d_behind / cues.closing_behind : inf;
    const double space_front = sv_space(cues.d_front, cfg);
    const double space_behind = sv_space(cues.d_behind, cfg);
    const double time_front = sv_time(ttc_front, cfg);
    const double time_behind = sv_time(ttc_behind, cfg);
    const double front_risk = space_front + time_front;
    const double rear_risk = space_behind + time_behind;
    const double f = sv_accel(cues.acc_front, cues.d_front, cfg);
    const double sv_f = combine_sv(space_front, time_front, f, cfg);
    const double sv_r = combine_sv(space_behind, time_behind, f, cfg);
    const double action = sv_to_action(sv_f, sv_r, front_risk, rear_risk, cfg);
    if (breakdown) {
        breakdown->front_risk = front_risk;
        breakdown->rear_risk = rear_risk;
        breakdown->sv_front = sv_f;
        breakdown->sv_rear = sv_r;
        breakdown->sv_accel = f;
        breakdown->escape_weight = std::clamp(
            (front_risk - rear_risk) / (2.0 * cfg.branch_band) + 0.5, 0.0, 1.0);
        breakdown->action = action;
    }
    return action;
}

}  // namespace fedil
