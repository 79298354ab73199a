#include "fedil/policy_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace fedil {
namespace {

constexpr char kMagic[4] = {'F', 'D', 'P', 'N'};
constexpr uint32_t kFormatVersion = 1;
constexpr uint32_t kWidths[4] = {kStateDim, kHidden, kHidden, 1};

struct LayerCache {
    std::array<double, kHidden> pre{};    // dense output z
    std::array<double, kHidden> zhat{};   // normalized z
    std::array<double, kHidden> act{};    // relu(g * zhat + s)
    std::array<bool, kHidden> on{};       // relu mask
    double inv_sd = 0.0;
};

struct ForwardCache {
    LayerCache l1, l2;
    double z3 = 0.0;
    double out = 0.0;
};

void dense_norm_relu(const float* w, const float* b, const float* g, const float* s,
                     const double* x, int fan_in, LayerCache& cache) {
    double mean = 0.0;
    for (int j = 0; j < kHidden; ++j) {
        double z = b[j];
        const float* row = w + static_cast<size_t>(j) * fan_in;
        for (int i = 0; i < fan_in; ++i) z += double(row[i]) * x[i];
        cache.pre[j] = z;
        mean += z;
    }
    mean /= kHidden;
    double var = 0.0;
    for (int j = 0; j < kHidden; ++j) {
        const double d = cache.pre[j] - mean;
        var += d * d;
    }
    var /= kHidden;
    cache.inv_sd = 1.0 / std::sqrt(var + kLayerNormEps);
    for (int j = 0; j < kHidden; ++j) {
        const double zhat = (cache.pre[j] - mean) * cache.inv_sd;
        cache.zhat[j] = zhat;
        const double y = double(g[j]) * zhat + double(s[j]);
        cache.on[j] = y > 0.0;
        cache.act[j] = cache.on[j] ? y : 0.0;
    }
}

double forward_cached(const PolicyParams& p, const double* x, ForwardCache& cache) {
    const float* f = p.flat.data();
    dense_norm_relu(f + kOffW1, f + kOffB1, f + kOffG1, f + kOffS1, x, kStateDim, cache.l1);
    dense_norm_relu(f + kOffW2, f + kOffB2, f + kOffG2, f + kOffS2, cache.l1.act.data(),
                    kHidden, cache.l2);
    double z3 = double(f[kOffB3]);
    for (int j = 0; j < kHidden; ++j) z3 += double(f[kOffW3 + j]) * cache.l2.act[j];
    cache.z3 = z3;
    cache.out = kActionScale * std::tanh(z3);
    return cache.out;
}

// dz = inv_sd * (dzhat - mean(dzhat) - zhat * mean(dzhat .* zhat))
void layer_norm_backward(const LayerCache& cache, const std::array<double, kHidden>& dzhat,
                         std::array<double, kHidden>& dz) {
    double m1 = 0.0, m2 = 0.0;
    for (int j = 0; j < kHidden; ++j) {
        m1 += dzhat[j];
        m2 += dzhat[j] * cache.zhat[j];
    }
    m1 /= kHidden;
    m2 /= kHidden;
    for (int j = 0; j < kHidden; ++j) {
        dz[j] = cache.inv_sd * (dzhat[j] - m1 - cache.zhat[j] * m2);
    }
}

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void put_u64(std::vector<unsigned char>& out, uint64_t v) {
    put_u32(out, static_cast<uint32_t>(v & 0xffffffffull));
    put_u32(out, static_cast<uint32_t>(v >> 32));
}

uint32_t get_u32(std::span<const unsigned char> b, size_t& pos) {
    if (pos + 4 > b.size()) throw std::runtime_error("checkpoint truncated");
    uint32_t v = uint32_t(b[pos]) | uint32_t(b[pos + 1]) << 8 | uint32_t(b[pos + 2]) << 16 |
                 uint32_t(b[pos + 3]) << 24;
    pos += 4;
    return v;
}

uint64_t get_u64(std::span<const unsigned char> b, size_t& pos) {
    const uint64_t lo = get_u32(b, pos);
    const uint64_t hi = get_u32(b, pos);
    return lo | hi << 32;
}

}  // namespace

PolicyParams PolicyParams::zeros() {
    PolicyParams p;
    p.flat.assign(kParamCount, 0.0f);
    return p;
}

PolicyParams PolicyParams::random_init(uint64_t seed) {
    PolicyParams p = zeros();
    std::mt19937_64 rng(seed);
    auto fill = [&rng, &p](size_t off, size_t count, int fan_in) {
        const double bound = 1.0 / std::sqrt(double(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (size_t i = 0; i < count; ++i) p.flat[off + i] = float(dist(rng));
    };
    fill(kOffW1, size_t{kHidden} * kStateDim, kStateDim);
    fill(kOffW2, size_t{kHidden} * kHidden, kHidden);
    fill(kOffW3, kHidden, kHidden);
    for (int j = 0; j < kHidden; ++j) {
        p.flat[kOffG1 + j] = 1.0f;
        p.flat[kOffG2 + j] = 1.0f;
    }
    return p;
}

double forward(const PolicyParams& params, const StateVector& state) {
    return forward(params, state.values.data());
}

double forward(const PolicyParams& params, const double* x) {
    if (params.flat.size() != kParamCount) throw std::invalid_argument("bad parameter vector size");
    ForwardCache cache;
    return forward_cached(params, x, cache);
}

BatchEval backward(const PolicyParams& params, std::span<const TrainPair> batch, Gradient& grad) {
    if (params.flat.size() != kParamCount) throw std::invalid_argument("bad parameter vector size");
    if (batch.empty()) throw std::invalid_argument("empty batch");
    grad.flat.assign(kParamCount, 0.0);
    BatchEval eval;
    eval.item_losses.reserve(batch.size());

    const float* f = params.flat.data();
    double* g = grad.flat.data();
    const double inv_b = 1.0 / double(batch.size());
    std::array<double, kStateDim> x{};
    ForwardCache cache;
    std::array<double, kHidden> dh{}, dy{}, dz{};

    for (const TrainPair& ex : batch) {
        for (int i = 0; i < kStateDim; ++i) x[i] = double(ex.state[i]);
        const double out = forward_cached(params, x.data(), cache);
        const double err = out - double(ex.target);
        eval.item_losses.push_back(err * err);
        eval.mean_loss += err * err * inv_b;

        // d(loss)/d(out), loss term weighted by 1/B
        const double dout = 2.0 * err * inv_b;
        const double th = std::tanh(cache.z3);
        const double dz3 = dout * kActionScale * (1.0 - th * th);

        g[kOffB3] += dz3;
        for (int j = 0; j < kHidden; ++j) {
            g[kOffW3 + j] += dz3 * cache.l2.act[j];
            dh[j] = dz3 * double(f[kOffW3 + j]);
        }

        // layer 2: relu -> affine norm params -> layer norm
        for (int j = 0; j < kHidden; ++j) {
            const double d = cache.l2.on[j] ? dh[j] : 0.0;
            g[kOffG2 + j] += d * cache.l2.zhat[j];
            g[kOffS2 + j] += d;
            dy[j] = d * double(f[kOffG2 + j]);
        }
        layer_norm_backward(cache.l2, dy, dz);
        for (int j = 0; j < kHidden; ++j) {
            g[kOffB2 + j] += dz[j];
            double* row = g + kOffW2 + static_cast<size_t>(j) * kHidden;
            for (int i = 0; i < kHidden; ++i) row[i] += dz[j] * cache.l1.act[i];
        }
        std::array<double, kHidden> dh1{};
        for (int j = 0; j < kHidden; ++j) {
            const float* row = f + kOffW2 + static_cast<size_t>(j) * kHidden;
            for (int i = 0; i < kHidden; ++i) dh1[i] += dz[j] * double(row[i]);
        }

        // layer 1
        for (int j = 0; j < kHidden; ++j) {
            const double d = cache.l1.on[j] ? dh1[j] : 0.0;
            g[kOffG1 + j] += d * cache.l1.zhat[j];
            g[kOffS1 + j] += d;
            dy[j] = d * double(f[kOffG1 + j]);
        }
        layer_norm_backward(cache.l1, dy, dz);
        for (int j = 0; j < kHidden; ++j) {
            g[kOffB1 + j] += dz[j];
            double* row = g + kOffW1 + static_cast<size_t>(j) * kStateDim;
            for (int i = 0; i < kStateDim; ++i) row[i] += dz[j] * x[i];
        }
    }
    return eval;
}

double il_loss(const PolicyParams& params, std::span<const TrainPair> batch) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    double sum = 0.0;
    std::array<double, kStateDim> x{};
    for (const TrainPair& ex : batch) {
        for (int i = 0; i < kStateDim; ++i) x[i] = double(ex.state[i]);
        const double err = forward(params, x.data()) - double(ex.target);
        sum += err * err;
    }
    return sum / double(batch.size());
}

AdamState AdamState::init(double lr0, int64_t total_steps) {
    if (total_steps <= 0) throw std::invalid_argument("total_steps must be > 0");
    AdamState s;
    s.m.assign(kParamCount, 0.0);
    s.v.assign(kParamCount, 0.0);
    s.lr0 = lr0;
    s.total_steps = total_steps;
    return s;
}

double AdamState::lr_at(int64_t t) const {
    const double frac = double(total_steps - t) / double(total_steps);
    return lr0 * std::max(0.0, frac);
}

void AdamState::reset_moments() {
    std::fill(m.begin(), m.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
}

void adam_step(PolicyParams& params, AdamState& state, const Gradient& grad) {
    if (grad.flat.size() != kParamCount || params.flat.size() != kParamCount)
        throw std::invalid_argument("size mismatch in adam_step");
    const int64_t t = ++state.step;
    const double lr = state.lr_at(t);
    const double bc1 = 1.0 - std::pow(state.beta1, double(t));
    const double bc2 = 1.0 - std::pow(state.beta2, double(t));
    for (size_t i = 0; i < kParamCount; ++i) {
        const double gi = grad.flat[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * gi;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * gi * gi;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params.flat[i] = float(double(params.flat[i]) - lr * mhat / (std::sqrt(vhat) + state.eps));
    }
}

std::vector<unsigned char> serialize(const PolicyParams& params) {
    if (params.flat.size() != kParamCount) throw std::invalid_argument("bad parameter vector size");
    std::vector<unsigned char> out;
    out.reserve(checkpoint_bytes());
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, kFormatVersion);
    put_u32(out, 4);
    for (uint32_t w : kWidths) put_u32(out, w);
    put_u32(out, params.version);
    put_u64(out, kParamCount);
    for (float value : params.flat) {
        uint32_t bits;
        std::memcpy(&bits, &value, 4);
        put_u32(out, bits);
    }
    return out;
}

PolicyParams deserialize(std::span<const unsigned char> bytes) {
    size_t pos = 0;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw std::runtime_error("bad checkpoint magic");
    pos = 4;
    if (get_u32(bytes, pos) != kFormatVersion) throw std::runtime_error("unsupported checkpoint format version");
    if (get_u32(bytes, pos) != 4) throw std::runtime_error("unexpected width list");
    for (uint32_t w : kWidths) {
        if (get_u32(bytes, pos) != w) throw std::runtime_error("layer widths do not match this build");
    }
    PolicyParams p;
    p.version = get_u32(bytes, pos);
    const uint64_t count = get_u64(bytes, pos);
    if (count != kParamCount) throw std::runtime_error("unexpected parameter count");
    if (bytes.size() - pos != count * 4) throw std::runtime_error("checkpoint payload size mismatch");
    p.flat.resize(kParamCount);
    for (size_t i = 0; i < kParamCount; ++i) {
        const uint32_t bits = get_u32(bytes, pos);
        std::memcpy(&p.flat[i], &bits, 4);
    }
    return p;
}

void save_checkpoint(const PolicyParams& params, const std::string& path) {
    const auto bytes = serialize(params);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

PolicyParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

size_t checkpoint_bytes() {
    return 4 + 4 + 4 + 16 + 4 + 8 + kParamCount * 4;
}

}  // namespace fedil
