#pragma once

#include <limits>

#include "fedil/episode.hpp"
#include "fedil/selection.hpp"

namespace fedil {

struct TrainingConfig {
    int batch_size = 48;
    double lr0 = 1e-3;
    int64_t total_steps = 6000;   // gradient-step cap, also the lr decay horizon
    size_t buffer_capacity = 100000;
    // Converged when the window-sized moving average of batch loss has not
    // improved on its best value by more than conv_tol for conv_span gradient
    // steps, and currently sits within conv_band of that best (relative). A
    // patience rule rather than a slope test: slope estimates from a noisy
    // curve cross zero transiently long before the loss plateaus, and the
    // band keeps a temporary loss spike from counting as a plateau.
    int conv_window = 200;
    int conv_span = 500;
    double conv_tol = 1e-4;
    double conv_band = 0.10;
};

struct CurvePoint {
    int64_t grad_step = 0;  // 1-based
    double batch_loss = 0.0;  // pre-update loss on the sampled batch
    double lr = 0.0;
};

// Behavioral cloning against the rule policy. Each sim step runs the rule
// controller, labels every vehicle's state with the clamped rule action,
// pushes the records that pass the upload gate, then takes one gradient
// step once the buffer holds a full batch.
class ILTrainer {
  public:
    struct Seeds {
        uint64_t sim = 1;
        uint64_t init = 2;
        uint64_t batch = 3;
    };

    ILTrainer(const SimConfig& sim_cfg, const RuleConfig& rules,
              const TrainingConfig& train_cfg, const SelectionConfig& selection,
              const Seeds& seeds);

    // One sim step plus at most one gradient step; true if a gradient step ran.
    bool step();
    // Runs to the gradient-step cap. Convergence is recorded on the way, not
    // used to stop: a fixed training length keeps runs comparable and the lr
    // schedule anneals to zero at the cap anyway.
    void run();

    const PolicyParams& params() const { return params_; }
    // Federation: adopt global weights; optimizer moments reset (stale
    // momentum from the pre-aggregation surface would mislead), the lr
    // schedule keeps its global position.
    void adopt(const PolicyParams& global);

    int64_t grad_steps() const { return opt_.step; }
    int64_t sim_steps() const { return sim_.world().step; }
    bool converged() const { return converged_at_ > 0; }
    int64_t converged_at() const { return converged_at_; }  // grad step, 0 = not yet
    const std::vector<CurvePoint>& curve() const { return curve_; }
    const ThresholdGate& gate() const { return gate_; }
    const ExperienceBuffer& buffer() const { return buffer_; }
    const Simulation& simulation() const { return sim_; }
    // Experiences consumed by gradient steps since the last call.
    int64_t take_consumed();

  private:
    void maybe_mark_converged();

    SimConfig sim_cfg_;
    TrainingConfig train_cfg_;
    Controller rule_controller_;
    Simulation sim_;
    ExperienceBuffer buffer_;
    ThresholdGate gate_;
    PolicyParams params_;
    AdamState opt_;
    std::mt19937_64 batch_rng_;
    std::vector<CurvePoint> curve_;
    std::vector<double> loss_prefix_;  // prefix sums of batch losses
    double best_ma_ = std::numeric_limits<double>::infinity();
    int64_t best_ma_at_ = 0;
    int64_t converged_at_ = 0;
    int64_t consumed_ = 0;
    int32_t trainer_id_ = 0;

  public:
    void set_trainer_id(int32_t id) { trainer_id_ = id; }
};

}  // namespace fedil
