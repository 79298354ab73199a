#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fedil/safety_rules.hpp"
#include "oracles.hpp"

using namespace fedil;

namespace {
const RuleConfig kRules;
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("spacing term frozen values") {
    CHECK(sv_space(10.0, kRules) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sv_space(20.0, kRules) == doctest::Approx(6.931471805599453).epsilon(1e-12));
    CHECK(sv_space(5.0, kRules) == doctest::Approx(-6.931471805599453).epsilon(1e-12));
    CHECK(sv_space(37.5, kRules) == doctest::Approx(13.217558399823195).epsilon(1e-12));
    CHECK(sv_space(0.0, kRules) == kRules.sv_min);
    CHECK_THROWS_AS(sv_space(-1.0, kRules), std::invalid_argument);
}

TEST_CASE("time term frozen values and branches") {
    CHECK(sv_time(0.5, kRules) == doctest::Approx(-82.50414836630856).epsilon(1e-12));
    CHECK(sv_time(0.9, kRules) == doctest::Approx(-26.51330954476749).epsilon(1e-12));
    CHECK(sv_time(0.1, kRules) == doctest::Approx(-2026.500166637277).epsilon(1e-9));
    CHECK(sv_time(1.0, kRules) == doctest::Approx(-21.76637722931641).epsilon(1e-12));
    CHECK(sv_time(2.9, kRules) == doctest::Approx(-4.029648378939391).epsilon(1e-12));
    // bridge region: penalty-curve end value at the guard, linear to the
    // bonus at the release horizon
    CHECK(sv_time(kRules.ttc_guard, kRules) == doctest::Approx(-3.8791387371741988).epsilon(1e-12));
    CHECK(sv_time(4.0, kRules) == doctest::Approx(-0.9395693685870996).epsilon(1e-12));
    CHECK(sv_time(4.5, kRules) == doctest::Approx(0.53021531570645).epsilon(1e-12));
    CHECK(sv_time(kRules.ttc_release, kRules) == 2.0);
    CHECK(sv_time(7.0, kRules) == 2.0);
    CHECK(sv_time(kInf, kRules) == 2.0);
    CHECK(sv_time(0.0, kRules) == kRules.sv_min);
    CHECK(sv_time(-3.0, kRules) == kRules.sv_min);
}

TEST_CASE("time term grows toward safety as ttc rises, with no cliff") {
    double prev = -1e18;
    for (double t = 0.05; t < kRules.ttc_release; t += 0.05) {
        const double cur = sv_time(t, kRules);
        CHECK(cur > prev);
        prev = cur;
    }
    // continuous at the guard: the bridge starts where the penalty curve ends
    CHECK(sv_time(kRules.ttc_guard - 1e-9, kRules) ==
          doctest::Approx(sv_time(kRules.ttc_guard, kRules)).epsilon(1e-6));
    // and at the release: the bridge ends at the bonus
    CHECK(sv_time(kRules.ttc_release - 1e-9, kRules) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("front braking term frozen values") {
    CHECK(sv_accel(0.0, 150.0, kRules) == 0.0);
    CHECK(sv_accel(0.0, 0.0, kRules) == 0.0);
    CHECK(sv_accel(5.0, 13.0, kRules) == doctest::Approx(3.1483711736098927).epsilon(1e-12));
    CHECK(sv_accel(-2.0, 30.0, kRules) == doctest::Approx(-1.9462325189191894).epsilon(1e-12));
    // cap: any gap beyond 15 m pins the log at ln(1.5)
    CHECK(sv_accel(-2.0, 30.0, kRules) == sv_accel(-2.0, 150.0, kRules));
    // inside d_threshold the factor floors at zero: the spacing and time
    // terms own the near field, anticipation must not flip sign there
    CHECK(sv_accel(3.0, 4.0, kRules) == 0.0);
    CHECK(sv_accel(-3.0, 5.0, kRules) == 0.0);
    CHECK(sv_accel(2.0, kRules.d_threshold, kRules) == 0.0);
    CHECK_THROWS_AS(sv_accel(1.0, -0.1, kRules), std::invalid_argument);
}

TEST_CASE("combined value clips to the admissible band") {
    CHECK(combine_sv(5.0, 4.0, 3.0, kRules) == 12.0);
    CHECK(combine_sv(10.0, 10.0, 10.0, kRules) == kRules.sv_max);
    CHECK(combine_sv(-30.0, 2.0, 0.0, kRules) == kRules.sv_min);
    CHECK(combine_sv(-kInf, 2.0, 0.0, kRules) == kRules.sv_min);
    CHECK(combine_sv(0.0, 2.0, kInf, kRules) == kRules.sv_max);
    CHECK_THROWS_AS(combine_sv(kInf, -kInf, 0.0, kRules), std::domain_error);
}

TEST_CASE("action conversion picks the branch by the riskier side") {
    // front side riskier (lower score): signed command, brakes when sv < 0
    CHECK(sv_to_action(-9.0, -12.0, 4.0, kRules) == doctest::Approx(-3.0));
    CHECK(sv_to_action(9.0, -12.0, 4.0, kRules) == doctest::Approx(3.0));
    // rear side riskier: escape forward regardless of sign
    CHECK(sv_to_action(-9.0, 4.0, -12.0, kRules) == doctest::Approx(3.0));
    CHECK(sv_to_action(9.0, 4.0, -12.0, kRules) == doctest::Approx(3.0));
    // ties take the escape branch
    CHECK(sv_to_action(-9.0, -5.0, -5.0, kRules) == doctest::Approx(3.0));
    CHECK(sv_to_action(0.0, -5.0, -5.0, kRules) == 0.0);
}

TEST_CASE("full pipeline matches the straight-line transcription") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> gap(0.1, 160.0);
    std::uniform_real_distribution<double> acc(-3.0, 3.0);
    std::uniform_real_distribution<double> closing(-7.0, 7.0);
    for (int i = 0; i < 2000; ++i) {
        NeighborCues cues;
        cues.d_front = gap(rng);
        cues.d_behind = gap(rng);
        cues.acc_front = acc(rng);
        cues.closing_front = closing(rng);
        cues.closing_behind = closing(rng);

        const double tf = oracle::ttc(cues.d_front, cues.closing_front);
        const double tb = oracle::ttc(cues.d_behind, cues.closing_behind);
        const double space_f =
            oracle::sv_space(cues.d_front, kRules.alpha_space, kRules.beta_space, kRules.sv_min);
        const double space_b =
            oracle::sv_space(cues.d_behind, kRules.alpha_space, kRules.beta_space, kRules.sv_min);
        const double time_f = oracle::sv_time(tf, kRules.alpha_time, kRules.beta_time,
                                              kRules.ttc_guard, kRules.ttc_release, kRules.sv_min);
        const double time_b = oracle::sv_time(tb, kRules.alpha_time, kRules.beta_time,
                                              kRules.ttc_guard, kRules.ttc_release, kRules.sv_min);
        const double front_risk = space_f + time_f;
        const double rear_risk = space_b + time_b;
        const bool front_binds = front_risk < rear_risk;
        const double expect = oracle::sv_to_action(
            oracle::combine_sv(
                front_binds ? space_f : space_b,
                front_binds ? time_f : time_b,
                oracle::sv_accel(cues.acc_front, cues.d_front, kRules.lambda_acc, kRules.beta_acc,
                                 kRules.alpha_acc, kRules.d_threshold),
                kRules.sv_min, kRules.sv_max),
            front_risk, rear_risk, kRules.eta);

        SvBreakdown bd;
        const double got = rule_action(cues, kRules, &bd);
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
        CHECK(bd.front_risk == doctest::Approx(front_risk).epsilon(1e-12));
        CHECK(bd.rear_risk == doctest::Approx(rear_risk).epsilon(1e-12));
        CHECK(bd.action == got);
        CHECK(std::fabs(got) <= kRules.sv_max / kRules.eta + 1e-12);
    }
}

TEST_CASE("opening gaps read as infinite ttc") {
    NeighborCues cues;
    cues.d_front = 12.0;
    cues.d_behind = 40.0;
    cues.acc_front = 0.0;
    cues.closing_front = -2.0;  // front pulling away
    cues.closing_behind = -1.0;
    SvBreakdown bd;
    rule_action(cues, kRules, &bd);
    CHECK(bd.sv_time == 2.0);
}

TEST_CASE("receding tailgater does not outrank a closing leader") {
    // rear gap tighter but opening, front gap wider but closing fast:
    // the rule must brake for the leader, not escape into it
    NeighborCues cues;
    cues.d_front = 4.0;
    cues.d_behind = 3.0;
    cues.acc_front = 0.0;
    cues.closing_front = 4.0;   // ttc = 1 s
    cues.closing_behind = -1.0; // opening
    const double a = rule_action(cues, kRules);
    CHECK(a < 0.0);
}
