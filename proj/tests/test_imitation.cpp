#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "fedil/imitation.hpp"
#include "oracles.hpp"

using namespace fedil;

namespace {
Experience tagged(float action) {
    Experience e;
    e.state.fill(0.5f);
    e.action = action;
    return e;
}
}  // namespace

TEST_CASE("wire record is nineteen float32 fields") {
    CHECK(kExperienceWireBytes == 76);
}

TEST_CASE("buffer keeps the newest records once full") {
    ExperienceBuffer buf(3);
    CHECK(buf.size() == 0);
    CHECK_FALSE(buf.can_sample(1));
    for (int i = 1; i <= 5; ++i) buf.push(tagged(float(i)));
    CHECK(buf.size() == 3);
    CHECK(buf.capacity() == 3);
    CHECK(buf.at(0).action == 3.0f);  // oldest survivor
    CHECK(buf.at(1).action == 4.0f);
    CHECK(buf.at(2).action == 5.0f);
    CHECK_THROWS_AS(buf.at(3), std::out_of_range);
    CHECK_THROWS_AS(ExperienceBuffer(0), std::invalid_argument);
}

TEST_CASE("sampling is without replacement and seed-stable") {
    ExperienceBuffer buf(100);
    for (int i = 0; i < 100; ++i) buf.push(tagged(float(i)));

    std::mt19937_64 rng_a(7), rng_b(7), rng_c(8);
    const auto a = buf.sample(48, rng_a);
    const auto b = buf.sample(48, rng_b);
    const auto c = buf.sample(48, rng_c);
    REQUIRE(a.size() == 48);

    std::set<float> distinct;
    for (const auto& ex : a) distinct.insert(ex.target);
    CHECK(distinct.size() == 48);

    bool ab_equal = true, ac_equal = true;
    for (size_t i = 0; i < a.size(); ++i) {
        ab_equal = ab_equal && a[i].target == b[i].target;
        ac_equal = ac_equal && a[i].target == c[i].target;
    }
    CHECK(ab_equal);
    CHECK_FALSE(ac_equal);

    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(buf.sample(101, rng), std::logic_error);
}

TEST_CASE("sampling a full buffer returns every record exactly once") {
    ExperienceBuffer buf(48);
    for (int i = 0; i < 48; ++i) buf.push(tagged(float(i)));
    std::mt19937_64 rng(3);
    const auto batch = buf.sample(48, rng);
    std::set<float> seen;
    for (const auto& ex : batch) seen.insert(ex.target);
    CHECK(seen.size() == 48);
}

TEST_CASE("mixed action blends model and rule then clamps") {
    CHECK(mixed_action(2.0, -1.0, 0.5, -3.0, 3.0) == doctest::Approx(0.5));
    CHECK(mixed_action(2.0, -1.0, 0.0, -3.0, 3.0) == doctest::Approx(-1.0));
    CHECK(mixed_action(2.0, -1.0, 1.0, -3.0, 3.0) == doctest::Approx(2.0));
    CHECK(mixed_action(5.0, 3.0, 0.5, -3.0, 3.0) == 3.0);
    CHECK(mixed_action(-5.0, -4.0, 0.5, -3.0, 3.0) == -3.0);
    CHECK_THROWS_AS(mixed_action(0.0, 0.0, -0.1, -3.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(mixed_action(0.0, 0.0, 1.1, -3.0, 3.0), std::invalid_argument);

    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> as(-4.0, 4.0), es(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double m = as(rng), r = as(rng), e = es(rng);
        CHECK(mixed_action(m, r, e, -3.0, 3.0) ==
              doctest::Approx(oracle::mixed(m, r, e, -3.0, 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("zero parameters reduce the loss to the mean squared target") {
    const PolicyParams zeros = PolicyParams::zeros();
    std::vector<TrainPair> batch(2);
    batch[0].target = 0.3f;
    batch[1].target = -0.3f;
    // targets are float32, so compare at float precision
    CHECK(il_loss(zeros, batch) == doctest::Approx(0.09).epsilon(1e-6));
}
