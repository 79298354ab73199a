#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "fedil/policy_net.hpp"
#include "oracles.hpp"

using namespace fedil;

namespace {

std::vector<TrainPair> random_batch(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xs(-1.0, 1.0), ts(-3.0, 3.0);
    std::vector<TrainPair> batch(n);
    for (auto& ex : batch) {
        for (auto& s : ex.state) s = float(xs(rng));
        ex.target = float(ts(rng));
    }
    return batch;
}

}  // namespace

TEST_CASE("parameter layout has the documented size") {
    CHECK(kParamCount == 5697);
    CHECK(PolicyParams::zeros().flat.size() == kParamCount);
    CHECK(PolicyParams::random_init(1).flat.size() == kParamCount);
}

TEST_CASE("initialization is seeded and bounded by fan-in") {
    const PolicyParams a = PolicyParams::random_init(42);
    const PolicyParams b = PolicyParams::random_init(42);
    const PolicyParams c = PolicyParams::random_init(43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    const double bound1 = 1.0 / std::sqrt(double(kStateDim));
    for (size_t i = kOffW1; i < kOffB1; ++i) CHECK(std::fabs(a.flat[i]) <= bound1);
    for (size_t i = kOffB1; i < kOffG1; ++i) CHECK(a.flat[i] == 0.0f);
    for (size_t i = kOffG1; i < kOffS1; ++i) CHECK(a.flat[i] == 1.0f);
    for (size_t i = kOffS1; i < kOffW2; ++i) CHECK(a.flat[i] == 0.0f);
    CHECK(a.flat[kOffB3] == 0.0f);
}

TEST_CASE("forward output is bounded and zero at zero parameters") {
    const PolicyParams zeros = PolicyParams::zeros();
    const PolicyParams params = PolicyParams::random_init(7);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> xs(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double x[kStateDim];
        for (double& u : x) u = xs(rng);
        CHECK(forward(zeros, x) == 0.0);
        const double y = forward(params, x);
        CHECK(std::fabs(y) < kActionScale);
    }
}

TEST_CASE("batch loss matches an explicit forward sweep") {
    const PolicyParams params = PolicyParams::random_init(3);
    const auto batch = random_batch(16, 4);
    std::vector<double> preds, targets;
    for (const auto& ex : batch) {
        double x[kStateDim];
        for (int i = 0; i < kStateDim; ++i) x[i] = double(ex.state[i]);
        preds.push_back(forward(params, x));
        targets.push_back(double(ex.target));
    }
    CHECK(il_loss(params, batch) == doctest::Approx(oracle::il_loss(preds, targets)).epsilon(1e-12));
    CHECK_THROWS_AS(il_loss(params, {}), std::invalid_argument);
}

TEST_CASE("analytic gradient agrees with float-quantized central differences") {
    PolicyParams params = PolicyParams::random_init(11);
    const auto batch = random_batch(8, 12);
    Gradient grad;
    const BatchEval eval = backward(params, batch, grad);
    CHECK(eval.item_losses.size() == 8);
    double mean = 0.0;
    for (double l : eval.item_losses) mean += l / 8.0;
    CHECK(eval.mean_loss == doctest::Approx(mean).epsilon(1e-12));

    // probe a spread of parameters: every 97th plus the output layer
    std::vector<size_t> probes;
    for (size_t i = 0; i < kParamCount; i += 97) probes.push_back(i);
    probes.push_back(kOffB3);
    probes.push_back(kOffW3 + 5);
    int checked = 0;
    for (size_t idx : probes) {
        const float saved = params.flat[idx];
        const float h = std::max(1e-4f, std::fabs(saved) * 1e-3f);
        const float up = saved + h;
        const float dn = saved - h;
        params.flat[idx] = up;
        const double lu = il_loss(params, batch);
        params.flat[idx] = dn;
        const double ld = il_loss(params, batch);
        params.flat[idx] = saved;
        const double numeric = (lu - ld) / (double(up) - double(dn));
        const double analytic = grad.flat[idx];
        const double denom = std::max({std::fabs(numeric), std::fabs(analytic), 1e-6});
        CHECK(std::fabs(numeric - analytic) / denom < 1e-3);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("first optimizer update moves each weight by -lr * sign(gradient)") {
    PolicyParams params = PolicyParams::random_init(21);
    const PolicyParams before = params;
    AdamState opt = AdamState::init(1e-3, 6000);
    Gradient grad;
    grad.flat.assign(kParamCount, 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> gs(0.05, 2.0);
    std::bernoulli_distribution flip(0.5);
    for (auto& g : grad.flat) g = flip(rng) ? gs(rng) : -gs(rng);
    adam_step(params, opt, grad);
    CHECK(opt.step == 1);
    const double lr1 = opt.lr_at(1);
    for (size_t i = 0; i < kParamCount; i += 31) {
        const double delta = double(params.flat[i]) - double(before.flat[i]);
        const double want = -lr1 * (grad.flat[i] > 0 ? 1.0 : -1.0);
        CHECK(std::fabs(delta - want) < 1e-6);
    }
}

TEST_CASE("learning rate decays linearly to zero") {
    AdamState opt = AdamState::init(1e-3, 6000);
    CHECK(opt.lr_at(1) == doctest::Approx(0.0009998333333333335).epsilon(1e-15));
    CHECK(opt.lr_at(3000) == doctest::Approx(5e-4).epsilon(1e-12));
    CHECK(opt.lr_at(6000) == 0.0);
    CHECK(opt.lr_at(9000) == 0.0);
    for (int64_t t = 1; t < 6000; t += 500) CHECK(opt.lr_at(t) > opt.lr_at(t + 500));
    CHECK_THROWS_AS(AdamState::init(1e-3, 0), std::invalid_argument);
}

TEST_CASE("training drives the loss down on a fixed batch") {
    PolicyParams params = PolicyParams::random_init(31);
    AdamState opt = AdamState::init(1e-3, 6000);
    const auto batch = random_batch(48, 32);
    Gradient grad;
    const double initial = il_loss(params, batch);
    double last = initial;
    for (int i = 0; i < 300; ++i) {
        backward(params, batch, grad);
        adam_step(params, opt, grad);
        last = il_loss(params, batch);
    }
    CHECK(last < initial * 0.2);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
    PolicyParams params = PolicyParams::random_init(77);
    params.version = 12345;
    const auto bytes = serialize(params);
    CHECK(bytes.size() == checkpoint_bytes());
    const PolicyParams back = deserialize(bytes);
    CHECK(back == params);
    CHECK(back.version == 12345);

    char path[] = "/tmp/fedil_ckpt_test.bin";
    save_checkpoint(params, path);
    const PolicyParams loaded = load_checkpoint(path);
    CHECK(loaded == params);
    std::remove(path);
}

TEST_CASE("corrupt checkpoints are rejected") {
    const PolicyParams params = PolicyParams::random_init(5);
    auto bytes = serialize(params);

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(deserialize(bad_magic), std::runtime_error);

    auto truncated = bytes;
    truncated.resize(truncated.size() - 5);
    CHECK_THROWS_AS(deserialize(truncated), std::runtime_error);

    auto bad_width = bytes;
    bad_width[12] = 19;  // first width field
    CHECK_THROWS_AS(deserialize(bad_width), std::runtime_error);

    CHECK_THROWS_AS(load_checkpoint("/tmp/fedil_does_not_exist.bin"), std::runtime_error);
}
