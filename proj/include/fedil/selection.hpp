#pragma once

#include <cstdint>
#include <vector>

#include "fedil/imitation.hpp"

namespace fedil {

// Loss-aware experience filtering. The trainer broadcasts a loss threshold
// computed from its latest batch; a vehicle uploads an experience only when
// the current model's squared error on it exceeds that threshold. Cheap,
// already-learned experiences stay local.
struct SelectionConfig {
    bool enabled = false;
    double discard_rate = 0.0;  // p in [0, 1): fraction of a batch deemed cheap
    int starvation_window = 200;  // steps without any upload before the gate opens
};

// Ascending-sorted losses[floor(p * n)], zero-based; p = 0 picks the
// minimum. Throws on an empty list or p outside [0, 1).
double compute_threshold(std::vector<double> batch_losses, double p);

// Squared error of the model on one experience, compared against the
// threshold; strict inequality, so a loss equal to the threshold is dropped.
struct UploadDecision {
    bool upload = false;
    double loss = 0.0;
};
UploadDecision should_upload(const Experience& e, const PolicyParams& params,
                             double threshold);

struct SavingsCounters {
    int64_t generated = 0;
    int64_t uploaded = 0;
    int64_t discarded = 0;
};

struct SavingsRow {
    int64_t step = 0;  // sim step, 0-based
    SavingsCounters totals;  // cumulative through this step
    double threshold = 0.0;
};

// Tracks the live threshold plus upload/discard counts. refresh() installs a
// new threshold from the latest batch losses; the starvation guard zeroes
// the threshold after starvation_window consecutive uploadless steps until
// the next refresh.
class ThresholdGate {
  public:
    explicit ThresholdGate(const SelectionConfig& cfg);
    // Applies the gate to a precomputed loss; updates counters.
    bool admit(double loss);
    void refresh(const std::vector<double>& batch_losses);
    // Call once per sim step, after all admits for that step.
    void end_step(int64_t step);
    double threshold() const { return threshold_; }
    const SavingsCounters& counters() const { return totals_; }
    const std::vector<SavingsRow>& history() const { return history_; }

  private:
    SelectionConfig cfg_;
    double threshold_ = 0.0;
    SavingsCounters totals_;
    std::vector<SavingsRow> history_;
    int steps_without_upload_ = 0;
    bool uploaded_this_step_ = false;
};

// Percentage of generated experiences discarded over the first
// horizon_steps sim steps. Throws if the history is shorter.
double savings_percent(const std::vector<SavingsRow>& history, int64_t horizon_steps);

}  // namespace fedil
