#include "fedil/imitation.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace fedil {

ExperienceBuffer::ExperienceBuffer(size_t capacity) {
    if (capacity == 0) throw std::invalid_argument("capacity must be > 0");
    ring_.reserve(capacity);
    ring_.resize(capacity);
}

void ExperienceBuffer::push(const Experience& e) {
    ring_[head_] = e;
    head_ = (head_ + 1) % ring_.size();
    if (head_ == 0) full_ = true;
}

const Experience& ExperienceBuffer::at(size_t i) const {
    if (i >= size()) throw std::out_of_range("experience index");
    const size_t base = full_ ? head_ : 0;
    return ring_[(base + i) % ring_.size()];
}

std::vector<TrainPair> ExperienceBuffer::sample(size_t batch, std::mt19937_64& rng) const {
    if (!can_sample(batch)) throw std::logic_error("buffer smaller than batch");
    const size_t n = size();
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    std::unordered_set<size_t> seen;
    std::vector<TrainPair> out;
    out.reserve(batch);
    while (out.size() < batch) {
        const size_t idx = pick(rng);
        if (!seen.insert(idx).second) continue;
        const Experience& e = at(idx);
        TrainPair pair;
        pair.state = e.state;
        pair.target = e.action;
        out.push_back(pair);
    }
    return out;
}

double mixed_action(double model_action, double rule_action, double epsilon,
                    double a_min, double a_max) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must be in [0, 1]");
    return std::clamp(epsilon * model_action + (1.0 - epsilon) * rule_action, a_min, a_max);
}

}  // namespace fedil
