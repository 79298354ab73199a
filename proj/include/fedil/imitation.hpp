#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "fedil/policy_net.hpp"
#include "fedil/safety_rules.hpp"

namespace fedil {

// One state/expert-action record. The action is always the rule policy's
// command clamped to the kinematic range, regardless of what the vehicle
// actually executed. 19 float32 fields cross the wire.
struct Experience {
    std::array<float, kStateDim> state{};
    float action = 0.0f;
    float loss_tag = -1.0f;  // squared model error at generation; < 0 = unset
    int32_t trainer_id = 0;
    int64_t step = 0;
};

inline constexpr size_t kExperienceWireBytes = (kStateDim + 1) * 4;

// FIFO ring; push evicts the oldest record once capacity is reached.
class ExperienceBuffer {
  public:
    explicit ExperienceBuffer(size_t capacity);
    void push(const Experience& e);
    size_t size() const { return full_ ? ring_.size() : head_; }
    size_t capacity() const { return ring_.size(); }
    bool can_sample(size_t batch) const { return size() >= batch; }
    // batch distinct records, uniform without replacement.
    std::vector<TrainPair> sample(size_t batch, std::mt19937_64& rng) const;
    // i = 0 is the oldest live record.
    const Experience& at(size_t i) const;

  private:
    std::vector<Experience> ring_;
    size_t head_ = 0;
    bool full_ = false;
};

// epsilon * model + (1 - epsilon) * rule, clamped to [a_min, a_max].
double mixed_action(double model_action, double rule_action, double epsilon,
                    double a_min, double a_max);

}  // namespace fedil
