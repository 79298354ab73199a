#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedil/cyber_lane.hpp"

namespace fedil {

// 18 -> 64 -> 64 -> 1 regression head. Each hidden layer is
// dense -> layer norm (learned gain/shift) -> ReLU; the output is
// kActionScale * tanh(z), so raw actions live in (-3, 3). Parameters are
// stored float32 for a compact wire format; all math runs in double.
inline constexpr int kHidden = 64;
inline constexpr double kActionScale = 3.0;
inline constexpr double kLayerNormEps = 1e-5;

// Flat layout: w1[64*18] b1[64] g1[64] s1[64] w2[64*64] b2[64] g2[64] s2[64]
// w3[64] b3[1]. Offsets are fixed by kStateDim/kHidden.
inline constexpr size_t kOffW1 = 0;
inline constexpr size_t kOffB1 = kOffW1 + size_t{kHidden} * kStateDim;
inline constexpr size_t kOffG1 = kOffB1 + kHidden;
inline constexpr size_t kOffS1 = kOffG1 + kHidden;
inline constexpr size_t kOffW2 = kOffS1 + kHidden;
inline constexpr size_t kOffB2 = kOffW2 + size_t{kHidden} * kHidden;
inline constexpr size_t kOffG2 = kOffB2 + kHidden;
inline constexpr size_t kOffS2 = kOffG2 + kHidden;
inline constexpr size_t kOffW3 = kOffS2 + kHidden;
inline constexpr size_t kOffB3 = kOffW3 + kHidden;
inline constexpr size_t kParamCount = kOffB3 + 1;

struct PolicyParams {
    std::vector<float> flat;
    uint32_t version = 0;  // bumped by training/aggregation for checkpoints

    static PolicyParams zeros();
    // Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases and layer-norm
    // shifts 0, layer-norm gains 1.
    static PolicyParams random_init(uint64_t seed);

    bool operator==(const PolicyParams& other) const {
        return flat == other.flat;
    }
};

// One training example: normalized state plus expert action target.
struct TrainPair {
    std::array<float, kStateDim> state{};
    float target = 0.0f;
};

double forward(const PolicyParams& params, const StateVector& state);
double forward(const PolicyParams& params, const double* x);

struct Gradient {
    std::vector<double> flat;  // kParamCount, same layout as PolicyParams
};

struct BatchEval {
    double mean_loss = 0.0;              // (1/B) sum |pi(s) - a|^2
    std::vector<double> item_losses;     // per example, batch order
};

// Mean squared action error over the batch plus its gradient w.r.t. every
// parameter. grad is resized and overwritten.
BatchEval backward(const PolicyParams& params, std::span<const TrainPair> batch,
                   Gradient& grad);

// Forward-only mean loss; throws on an empty batch.
double il_loss(const PolicyParams& params, std::span<const TrainPair> batch);

struct AdamState {
    std::vector<double> m, v;  // first/second moments, kParamCount
    int64_t step = 0;          // completed updates
    double lr0 = 1e-3;
    int64_t total_steps = 6000;  // linear decay horizon; lr hits 0 at the end
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    static AdamState init(double lr0, int64_t total_steps);
    // lr for 1-based update index t: lr0 * (total - t) / total, floored at 0.
    double lr_at(int64_t t) const;
    void reset_moments();
};

// One bias-corrected Adam update; increments state.step.
void adam_step(PolicyParams& params, AdamState& state, const Gradient& grad);

// Little-endian checkpoint: magic "FDPN", format version, the four layer
// widths, model version, parameter count, raw float32 payload. Round-trips
// bit-exactly.
std::vector<unsigned char> serialize(const PolicyParams& params);
PolicyParams deserialize(std::span<const unsigned char> bytes);
void save_checkpoint(const PolicyParams& params, const std::string& path);
PolicyParams load_checkpoint(const std::string& path);

// Serialized checkpoint size in bytes, for communication accounting.
size_t checkpoint_bytes();

}  // namespace fedil
