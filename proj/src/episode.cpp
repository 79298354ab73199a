#include "fedil/episode.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fedil {

const char* to_string(ControlMode mode) {
    switch (mode) {
        case ControlMode::RuleOnly: return "rule";
        case ControlMode::ModelOnly: return "model";
        case ControlMode::Mixed: return "mixed";
    }
    return "?";
}

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg.n_lanes <= 0) throw std::invalid_argument("n_lanes must be > 0");
    if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be > 0");
    world_.spawn_queue.assign(size_t(cfg.n_lanes), 0);
}

void Simulation::step(const Controller& controller, const StepHooks& hooks) {
    if (controller.mode != ControlMode::RuleOnly && controller.params == nullptr)
        throw std::invalid_argument("model parameters required for this control mode");

    for (int lane = 0; lane < cfg_.n_lanes; ++lane) {
        world_.spawn_queue[lane] += sample_arrivals(rng_, cfg_.arrival_rate, cfg_.dt);
        if (world_.spawn_queue[lane] > 0 && entry_clear(world_, lane, cfg_)) {
            spawn_vehicle(world_, lane, cfg_);
            --world_.spawn_queue[lane];
        }
    }

    if (!world_.vehicles.empty()) {
        const auto projection = project(world_.vehicles);
        std::vector<double> commands(world_.vehicles.size());
        for (size_t i = 0; i < world_.vehicles.size(); ++i) {
            const VehicleState& veh = world_.vehicles[i];
            const EgoView view = make_ego_view(projection, veh.id, cfg_);
            SvBreakdown breakdown;
            const double rule_a = rule_action(view.cues, controller.rules,
                                              hooks.on_rule_trace ? &breakdown : nullptr);
            double exec_a = rule_a;
            switch (controller.mode) {
                case ControlMode::RuleOnly:
                    break;
                case ControlMode::ModelOnly:
                    exec_a = forward(*controller.params, view.state);
                    break;
                case ControlMode::Mixed:
                    exec_a = mixed_action(forward(*controller.params, view.state), rule_a,
                                          controller.epsilon, cfg_.a_min, cfg_.a_max);
                    break;
            }
            commands[i] = exec_a;
            if (hooks.on_rule_trace) hooks.on_rule_trace(world_.step, veh.id, breakdown);
            if (hooks.on_decision) {
                Decision d;
                d.vehicle = &veh;
                d.state = &view.state;
                d.cues = &view.cues;
                d.rule_action = rule_a;
                d.exec_action = exec_a;
                hooks.on_decision(world_.step, d);
            }
        }
        for (size_t i = 0; i < world_.vehicles.size(); ++i) {
            step_kinematics(world_.vehicles[i], commands[i], cfg_);
        }
        detect_collisions(world_, cfg_);
        retire_vehicles(world_);
    }
    ++world_.step;
}

EpisodeLog Simulation::log() const {
    EpisodeLog log;
    log.steps = world_.step;
    log.n_spawned = world_.n_spawned;
    log.n_collided = world_.n_collided;
    log.completed = world_.completed;
    log.collisions = world_.collisions;
    return log;
}

EpisodeLog run_episode(const SimConfig& cfg, const Controller& controller,
                       const StepHooks& hooks) {
    Simulation sim(cfg);
    for (int i = 0; i < cfg.episode_steps; ++i) sim.step(controller, hooks);
    return sim.log();
}

void write_episode_csv(const EpisodeLog& log, const std::string& path,
                       const std::string& header_comment) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << header_comment;
    char line[256];
    std::snprintf(line, sizeof line, "# steps=%lld spawned=%lld collided=%lld\n",
                  static_cast<long long>(log.steps), static_cast<long long>(log.n_spawned),
                  static_cast<long long>(log.n_collided));
    out << line;
    out << "record,id,lane,spawn_step,exit_step,sum_sq_jerk,step,id_b,same_lane\n";
    for (const auto& c : log.completed) {
        std::snprintf(line, sizeof line, "completed,%lld,%d,%lld,%lld,%.17g,,,\n",
                      static_cast<long long>(c.id), c.lane, static_cast<long long>(c.spawn_step),
                      static_cast<long long>(c.exit_step), c.sum_sq_jerk);
        out << line;
    }
    for (const auto& ev : log.collisions) {
        std::snprintf(line, sizeof line, "collision,%lld,,,,,%lld,%lld,%d\n",
                      static_cast<long long>(ev.id_a), static_cast<long long>(ev.step),
                      static_cast<long long>(ev.id_b), ev.same_lane ? 1 : 0);
        out << line;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fedil
