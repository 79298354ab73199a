#pragma once

#include <functional>
#include <string>

#include "fedil/imitation.hpp"

namespace fedil {

enum class ControlMode { RuleOnly, ModelOnly, Mixed };

const char* to_string(ControlMode mode);

struct Controller {
    ControlMode mode = ControlMode::RuleOnly;
    RuleConfig rules;
    const PolicyParams* params = nullptr;  // required unless RuleOnly
    double epsilon = 0.5;                  // model share in Mixed
};

// Per-vehicle observation made just before an action is chosen.
struct Decision {
    const VehicleState* vehicle = nullptr;
    const StateVector* state = nullptr;
    const NeighborCues* cues = nullptr;
    double rule_action = 0.0;  // unclamped rule command
    double exec_action = 0.0;  // command handed to the integrator
};

struct StepHooks {
    // Called once per live vehicle per step, before kinematics.
    std::function<void(int64_t step, const Decision&)> on_decision;
    std::function<void(int64_t step, int64_t vehicle_id, const SvBreakdown&)> on_rule_trace;
};

struct EpisodeLog {
    int64_t steps = 0;
    int64_t n_spawned = 0;
    int64_t n_collided = 0;
    std::vector<CompletedVehicle> completed;
    std::vector<CollisionEvent> collisions;
};

// Owns a world and advances it one decision/integration cycle at a time.
// Step order: arrivals/spawns, cyber-lane projection, per-vehicle decisions
// (simultaneous, from the pre-step world), kinematics, collision removal,
// retirement.
class Simulation {
  public:
    explicit Simulation(const SimConfig& cfg);
    void step(const Controller& controller, const StepHooks& hooks = {});
    const WorldState& world() const { return world_; }
    const SimConfig& config() const { return cfg_; }
    EpisodeLog log() const;

  private:
    SimConfig cfg_;
    WorldState world_;
    std::mt19937_64 rng_;
};

// Runs cfg.episode_steps steps and returns the log. Deterministic in
// (cfg, controller): a fixed seed yields an identical log.
EpisodeLog run_episode(const SimConfig& cfg, const Controller& controller,
                       const StepHooks& hooks = {});

void write_episode_csv(const EpisodeLog& log, const std::string& path,
                       const std::string& header_comment);

}  // namespace fedil
