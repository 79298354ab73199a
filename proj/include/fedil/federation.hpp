#pragma once

#include "fedil/metrics.hpp"
#include "fedil/trainer.hpp"

namespace fedil {

enum class AggregationMode { SameProportion, DensityAware };

const char* to_string(AggregationMode mode);

// Element-wise weighted average of local models. Same-proportion weights are
// proportional to each node's consumed data count d_n; density-aware weights
// scale d_n by the node's normalized traffic density before renormalizing.
// If every d_n is zero there is nothing to average: the previous global is
// returned with aggregated = false.
struct AggregateResult {
    PolicyParams model;
    std::vector<double> weights;
    bool aggregated = false;
};

AggregateResult aggregate(const std::vector<const PolicyParams*>& locals,
                          const std::vector<int64_t>& data_counts,
                          const std::vector<double>& densities,
                          AggregationMode mode, const PolicyParams& previous_global);

struct FederationConfig {
    std::vector<double> densities = {300.0, 900.0, 1500.0, 2100.0};  // veh/lane/h per node
    int rounds = 10;
    int steps_per_round = 300;  // sim steps each node runs per round
    AggregationMode mode = AggregationMode::DensityAware;
    int eval_steps = 0;      // per-round global-model eval episode length; 0 = skip
    uint64_t master_seed = 1;
    SimConfig base_sim;      // arrival_rate/seed overridden per node
    RuleConfig rules;
    TrainingConfig training;  // total_steps derived from rounds * steps_per_round
};

struct RoundRow {
    int round = 0;    // 1-based
    int trainer = 0;  // node index
    double density = 0.0;
    int64_t d_n = 0;        // experiences consumed this round
    double weight = 0.0;    // aggregation weight applied
    double local_loss = 0.0;  // last batch loss of the round, -1 if none
    int64_t bytes_up = 0;     // local model upload
    int64_t bytes_down = 0;   // global model download
    int64_t experiences_up = 0;
    double eval_collision_ratio = -1.0;  // global model at this node's density
    double eval_discomfort = -1.0;       // -1 when eval is skipped
};

struct FederationResult {
    PolicyParams global;
    std::vector<RoundRow> rows;
    int64_t bytes_model_up = 0;
    int64_t bytes_model_down = 0;
    int64_t bytes_experience_up = 0;
};

// Synchronous rounds over one trainer per density. Nodes keep their
// simulation and buffer across rounds; traffic streams are seeded by node
// only, so both aggregation modes see identical local data under the same
// master seed. Every generated experience is uploaded (no selection here).
FederationResult run_federation(const FederationConfig& cfg);

}  // namespace fedil
