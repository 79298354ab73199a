#pragma once

#include "fedil/cyber_lane.hpp"

namespace fedil {

// Analytic safety-value policy. Three hazard terms (spacing, time-to-
// collision, front-vehicle braking) are summed, clipped to
// [sv_min, sv_max], and converted to a longitudinal acceleration command.
struct RuleConfig {
    double alpha_space = 10.0;   // m, neutral gap: sv_space(alpha_space) == 0
    double beta_space = 10.0;    // gain on ln(d / alpha_space)
    double alpha_time = 1.5;
    double beta_time = 2.0;      // even integer, keeps the term a penalty
    double ttc_guard = 3.0;      // s, horizon below which the time term engages
    // Horizon beyond which the time term pays its full no-threat bonus. The
    // penalty curve ends at -(alpha_time / tanh(1))^beta_time when ttc hits
    // ttc_guard; paying the bonus right there would leave a cliff of almost
    // six units that step-to-step closing-speed noise crosses constantly in
    // packed traffic, turning the term into an action chatter source. A
    // linear bridge over [ttc_guard, ttc_release] removes the cliff.
    double ttc_release = 5.0;    // s
    double alpha_acc = 1.5;      // cap on d_front / d_threshold
    double beta_acc = 12.0;
    double lambda_acc = 0.2;
    double d_threshold = 10.0;   // m, reference gap for the braking term
    double sv_max = 20.0;
    double sv_min = -20.0;
    double eta = 3.0;            // safety value units per m/s^2
    // Half-width (in risk-score units) of the band around the front/rear
    // risk tie inside which the escape and brake commands are blended
    // linearly instead of switched. In a packed platoon the two risks hover
    // within a unit of each other and cross every few steps; a hard switch
    // there swings the command by the full escape-to-brake range, and that
    // chatter dominates discomfort at high density. Outside the band the
    // behavior is exactly the hard-switch rule.
    double branch_band = 0.5;
};

struct SvBreakdown {
    double front_risk = 0.0;     // spacing + time terms on the front gap
    double rear_risk = 0.0;      // spacing + time terms on the rear gap
    double sv_front = 0.0;       // clipped sum anchored on the front side
    double sv_rear = 0.0;        // clipped sum anchored on the rear side
    double sv_accel = 0.0;       // front-braking anticipation term
    double escape_weight = 0.0;  // 1 = pure escape, 0 = pure brake
    double action = 0.0;         // before kinematic clamping
};

// beta_space * ln(d / alpha_space); d == 0 yields sv_min (contact).
double sv_space(double d, const RuleConfig& cfg);

// -(alpha_time / tanh(t / ttc_guard))^beta_time for 0 < t < ttc_guard; a
// constant bonus of 2 from ttc_release on, reached by a linear bridge from
// the penalty curve's end value across [ttc_guard, ttc_release); t <= 0
// (collision due or overdue) yields sv_min. t is time-to-collision:
// gap / closing speed, +inf when opening.
double sv_time(double ttc_seconds, const RuleConfig& cfg);

// lambda_acc * acc_front * beta_acc * ln(min(d_front / d_threshold,
// alpha_acc)): negative when the front vehicle brakes at close range.
// acc_front == 0 short-circuits to 0 so a zero gap cannot produce 0 * inf.
double sv_accel(double acc_front, double d_front, const RuleConfig& cfg);

// Sum of the three terms clipped to [sv_min, sv_max]; infinities clamp to
// the corresponding bound.
double combine_sv(double space, double time, double accel, const RuleConfig& cfg);

// Converts the two per-side safety values to an acceleration. Risk scores
// are spacing + time terms per side; lower means more urgent. When the rear
// side is more urgent by at least branch_band the vehicle escapes forward
// with |sv_rear / eta|; when the front side is more urgent by the same
// margin the signed sv_front / eta brakes for the hazard ahead; between the
// two the commands blend linearly (an exact tie weighs them equally).
// Escaping must stay available even in packed traffic: vehicles cannot
// stop, so a pair almost coincident on the cyber lane can only separate by
// the front one accelerating away.
double sv_to_action(double sv_front, double sv_rear, double front_risk, double rear_risk,
                    const RuleConfig& cfg);

// Full pipeline from gap cues to an acceleration command. Each side is
// scored sv_space(gap) + sv_time(gap / closing), closing <= 0 giving +inf
// ttc; each side's spacing and time terms plus the shared front-braking
// term form that side's safety value, and the risk pair picks the branch
// (or the blend, near a tie). Distance alone cannot pick the side: a
// receding tailgater is harmless while a slower leader a little farther
// out is not. Optionally reports the per-term breakdown.
double rule_action(const NeighborCues& cues, const RuleConfig& cfg,
                   SvBreakdown* breakdown = nullptr);

}  // namespace fedil
