#include "fedil/trainer.hpp"

#include <algorithm>
#include <cmath>

namespace fedil {
namespace {

SimConfig with_seed(SimConfig cfg, uint64_t seed) {
    cfg.seed = seed;
    return cfg;
}

}  // namespace

ILTrainer::ILTrainer(const SimConfig& sim_cfg, const RuleConfig& rules,
                     const TrainingConfig& train_cfg, const SelectionConfig& selection,
                     const Seeds& seeds)
    : sim_cfg_(with_seed(sim_cfg, seeds.sim)),
      train_cfg_(train_cfg),
      sim_(sim_cfg_),
      buffer_(train_cfg.buffer_capacity),
      gate_(selection),
      params_(PolicyParams::random_init(seeds.init)),
      opt_(AdamState::init(train_cfg.lr0, train_cfg.total_steps)),
      batch_rng_(seeds.batch) {
    rule_controller_.mode = ControlMode::RuleOnly;
    rule_controller_.rules = rules;
    loss_prefix_.push_back(0.0);
}

bool ILTrainer::step() {
    StepHooks hooks;
    hooks.on_decision = [this](int64_t step, const Decision& d) {
        Experience e;
        for (int i = 0; i < kStateDim; ++i) e.state[i] = float(d.state->values[i]);
        // Accelerating past the speed cap is unrealizable: the plant truncates
        // the command, so the demonstrated behavior near v_max is a taper, not
        // a sustained +a_max. Cloning the raw command there would teach the
        // model to slam into the cap, paying a jerk spike the expert's own
        // trajectory never exhibits. Brake commands are cloned as commanded:
        // labeling the realized floor truncation instead would make the net
        // generalize weak braking from v_min to speeds just above it, where
        // full braking is still available and needed.
        const double cmd = std::clamp(d.rule_action, sim_cfg_.a_min, sim_cfg_.a_max);
        const double hi = (sim_cfg_.v_max - d.vehicle->v) / sim_cfg_.dt;
        e.action = float(std::min(cmd, std::max(hi, 0.0)));
        e.trainer_id = trainer_id_;
        e.step = step;
        const UploadDecision ud = should_upload(e, params_, gate_.threshold());
        e.loss_tag = float(ud.loss);
        if (gate_.admit(ud.loss)) buffer_.push(e);
    };
    sim_.step(rule_controller_, hooks);
    gate_.end_step(sim_.world().step - 1);

    if (opt_.step >= train_cfg_.total_steps) return false;
    if (!buffer_.can_sample(size_t(train_cfg_.batch_size))) return false;

    const auto batch = buffer_.sample(size_t(train_cfg_.batch_size), batch_rng_);
    Gradient grad;
    const BatchEval eval = backward(params_, batch, grad);
    adam_step(params_, opt_, grad);
    consumed_ += int64_t(batch.size());
    params_.version++;

    CurvePoint pt;
    pt.grad_step = opt_.step;
    pt.batch_loss = eval.mean_loss;
    pt.lr = opt_.lr_at(opt_.step);
    curve_.push_back(pt);
    loss_prefix_.push_back(loss_prefix_.back() + eval.mean_loss);
    gate_.refresh(eval.item_losses);
    maybe_mark_converged();
    return true;
}

void ILTrainer::maybe_mark_converged() {
    if (converged_at_ > 0) return;
    const int64_t t = opt_.step;
    const int64_t w = train_cfg_.conv_window;
    if (t < w) return;
    const double ma = (loss_prefix_[size_t(t)] - loss_prefix_[size_t(t - w)]) / double(w);
    if (ma < best_ma_ - train_cfg_.conv_tol) {
        best_ma_ = ma;
        best_ma_at_ = t;
        return;
    }
    if (t - best_ma_at_ >= train_cfg_.conv_span &&
        ma <= best_ma_ * (1.0 + train_cfg_.conv_band) + train_cfg_.conv_tol)
        converged_at_ = t;
}

void ILTrainer::run() {
    // Sim-step guard: a config whose traffic is too sparse to ever fill a
    // batch must not spin forever.
    const int64_t sim_cap = train_cfg_.total_steps + (1 << 20);
    while (opt_.step < train_cfg_.total_steps && sim_.world().step < sim_cap) step();
}

void ILTrainer::adopt(const PolicyParams& global) {
    params_ = global;
    opt_.reset_moments();
}

int64_t ILTrainer::take_consumed() {
    const int64_t n = consumed_;
    consumed_ = 0;
    return n;
}

}  // namespace fedil
