#include "fedil/federation.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "fedil/seeding.hpp"

namespace fedil {

const char* to_string(AggregationMode mode) {
    return mode == AggregationMode::SameProportion ? "same" : "density";
}

AggregateResult aggregate(const std::vector<const PolicyParams*>& locals,
                          const std::vector<int64_t>& data_counts,
                          const std::vector<double>& densities,
                          AggregationMode mode, const PolicyParams& previous_global) {
    const size_t n = locals.size();
    if (n == 0) throw std::invalid_argument("no local models");
    if (data_counts.size() != n || densities.size() != n)
        throw std::invalid_argument("locals, data counts and densities must align");
    double density_total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (!locals[i] || locals[i]->flat.size() != kParamCount)
            throw std::invalid_argument("bad local model");
        if (data_counts[i] < 0) throw std::invalid_argument("negative data count");
        if (densities[i] <= 0.0) throw std::invalid_argument("densities must be > 0");
        density_total += densities[i];
    }

    AggregateResult result;
    result.weights.assign(n, 0.0);
    double base_sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double base = double(data_counts[i]);
        if (mode == AggregationMode::DensityAware) base *= densities[i] / density_total;
        result.weights[i] = base;
        base_sum += base;
    }
    if (base_sum == 0.0) {
        result.model = previous_global;
        result.aggregated = false;
        std::fill(result.weights.begin(), result.weights.end(), 0.0);
        return result;
    }
    for (double& w : result.weights) w /= base_sum;

    result.model.flat.resize(kParamCount);
    result.model.version = previous_global.version + 1;
    for (size_t k = 0; k < kParamCount; ++k) {
        double acc = 0.0;
        for (size_t i = 0; i < n; ++i) acc += result.weights[i] * double(locals[i]->flat[k]);
        result.model.flat[k] = float(acc);
    }
    result.aggregated = true;
    return result;
}

FederationResult run_federation(const FederationConfig& cfg) {
    const size_t n = cfg.densities.size();
    if (n == 0) throw std::invalid_argument("at least one node required");
    if (cfg.rounds <= 0 || cfg.steps_per_round <= 0)
        throw std::invalid_argument("rounds and steps_per_round must be > 0");

    TrainingConfig tc = cfg.training;
    tc.total_steps = int64_t(cfg.rounds) * cfg.steps_per_round;

    PolicyParams global = PolicyParams::random_init(derive_seed(cfg.master_seed, "fl/init"));
    global.version = 0;

    std::vector<std::unique_ptr<ILTrainer>> nodes;
    std::vector<int64_t> uploads_seen(n, 0);
    char role[64];
    for (size_t i = 0; i < n; ++i) {
        SimConfig sim = cfg.base_sim;
        sim.arrival_rate = cfg.densities[i];
        ILTrainer::Seeds seeds;
        std::snprintf(role, sizeof role, "fl/sim/trainer=%zu", i);
        seeds.sim = derive_seed(cfg.master_seed, role);
        std::snprintf(role, sizeof role, "fl/batch/trainer=%zu", i);
        seeds.batch = derive_seed(cfg.master_seed, role);
        seeds.init = derive_seed(cfg.master_seed, "fl/init");
        SelectionConfig no_selection;  // federation uploads everything
        nodes.push_back(std::make_unique<ILTrainer>(sim, cfg.rules, tc, no_selection, seeds));
        nodes.back()->set_trainer_id(int32_t(i));
    }

    FederationResult result;
    const int64_t ckpt = int64_t(checkpoint_bytes());
    for (int round = 1; round <= cfg.rounds; ++round) {
        std::vector<int64_t> d(n, 0);
        std::vector<double> local_loss(n, -1.0);
        std::vector<int64_t> exp_up(n, 0);
        for (size_t i = 0; i < n; ++i) {
            ILTrainer& node = *nodes[i];
            node.adopt(global);
            result.bytes_model_down += ckpt;
            const size_t curve_before = node.curve().size();
            for (int s = 0; s < cfg.steps_per_round; ++s) node.step();
            d[i] = node.take_consumed();
            if (node.curve().size() > curve_before) local_loss[i] = node.curve().back().batch_loss;
            const int64_t uploads_total = node.gate().counters().uploaded;
            exp_up[i] = uploads_total - uploads_seen[i];
            uploads_seen[i] = uploads_total;
            result.bytes_experience_up += exp_up[i] * int64_t(kExperienceWireBytes);
            result.bytes_model_up += ckpt;
        }

        std::vector<const PolicyParams*> locals;
        locals.reserve(n);
        for (auto& node : nodes) locals.push_back(&node->params());
        AggregateResult agg = aggregate(locals, d, cfg.densities, cfg.mode, global);
        global = agg.model;

        for (size_t i = 0; i < n; ++i) {
            RoundRow row;
            row.round = round;
            row.trainer = int(i);
            row.density = cfg.densities[i];
            row.d_n = d[i];
            row.weight = agg.weights[i];
            row.local_loss = local_loss[i];
            row.bytes_up = ckpt;
            row.bytes_down = ckpt;
            row.experiences_up = exp_up[i];
            if (cfg.eval_steps > 0) {
                SimConfig eval_sim = cfg.base_sim;
                eval_sim.arrival_rate = cfg.densities[i];
                eval_sim.episode_steps = cfg.eval_steps;
                std::snprintf(role, sizeof role, "fl/eval/round=%d/trainer=%zu", round, i);
                eval_sim.seed = derive_seed(cfg.master_seed, role);
                Controller eval_ctrl;
                eval_ctrl.mode = ControlMode::ModelOnly;
                eval_ctrl.rules = cfg.rules;
                eval_ctrl.params = &global;
                const EpisodeLog log = run_episode(eval_sim, eval_ctrl);
                if (log.n_spawned > 0) {
                    const IndicatorSet ind = indicators_from_log(log, eval_sim);
                    row.eval_collision_ratio = ind.collision_ratio;
                    row.eval_discomfort = ind.discomfort;
                }
            }
            result.rows.push_back(row);
        }
    }
    result.global = global;
    return result;
}

}  // namespace fedil
