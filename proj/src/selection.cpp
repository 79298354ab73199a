#include "fedil/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedil {

double compute_threshold(std::vector<double> batch_losses, double p) {
    if (batch_losses.empty()) throw std::invalid_argument("empty loss list");
    if (p < 0.0 || p >= 1.0) throw std::invalid_argument("discard rate must be in [0, 1)");
    std::sort(batch_losses.begin(), batch_losses.end());
    const size_t idx = size_t(std::floor(p * double(batch_losses.size())));
    return batch_losses[std::min(idx, batch_losses.size() - 1)];
}

UploadDecision should_upload(const Experience& e, const PolicyParams& params,
                             double threshold) {
    double x[kStateDim];
    for (int i = 0; i < kStateDim; ++i) x[i] = double(e.state[i]);
    const double err = forward(params, x) - double(e.action);
    UploadDecision d;
    d.loss = err * err;
    d.upload = d.loss > threshold;
    return d;
}

ThresholdGate::ThresholdGate(const SelectionConfig& cfg) : cfg_(cfg) {
    if (cfg.enabled && (cfg.discard_rate < 0.0 || cfg.discard_rate >= 1.0))
        throw std::invalid_argument("discard rate must be in [0, 1)");
}

bool ThresholdGate::admit(double loss) {
    ++totals_.generated;
    const bool upload = !cfg_.enabled || loss > threshold_;
    if (upload) {
        ++totals_.uploaded;
        uploaded_this_step_ = true;
    } else {
        ++totals_.discarded;
    }
    return upload;
}

void ThresholdGate::refresh(const std::vector<double>& batch_losses) {
    if (!cfg_.enabled) return;
    threshold_ = compute_threshold(batch_losses, cfg_.discard_rate);
}

void ThresholdGate::end_step(int64_t step) {
    if (cfg_.enabled) {
        if (uploaded_this_step_) {
            steps_without_upload_ = 0;
        } else if (++steps_without_upload_ >= cfg_.starvation_window) {
            threshold_ = 0.0;  // open until the next refresh
            steps_without_upload_ = 0;
        }
    }
    uploaded_this_step_ = false;
    SavingsRow row;
    row.step = step;
    row.totals = totals_;
    row.threshold = threshold_;
    history_.push_back(row);
}

double savings_percent(const std::vector<SavingsRow>& history, int64_t horizon_steps) {
    if (horizon_steps <= 0) throw std::invalid_argument("horizon must be > 0");
    if (int64_t(history.size()) < horizon_steps)
        throw std::invalid_argument("history shorter than requested horizon");
    const SavingsCounters& c = history[size_t(horizon_steps) - 1].totals;
    if (c.generated == 0) return 0.0;
    return 100.0 * double(c.discarded) / double(c.generated);
}

}  // namespace fedil
