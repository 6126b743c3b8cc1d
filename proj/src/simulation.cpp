/*
 Copyright 2026 The cbft Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "cbft/simulation.hpp"

namespace cbft {

Simulation::Simulation(World world, Condition condition, Mode mode, PipelineConfig config)
    : world_(std::move(world)),
      barriers_(world_to_barriers(world_)),
      condition_(condition),
      mode_(mode),
      config_(std::move(config)) {
    validate(config_);
    state_.position = world_.start.position;
    state_.yaw = wrap_angle(world_.start.yaw);
    collision_ = collision_query(state_.position, world_, config_.trial.crash);
    min_barrier_ = barriers_.min_value(state_.position);
}

TickReport Simulation::tick(const StickInput& raw_input) {
    const ControlConfig& control = config_.control;
    TickReport rep;
    rep.tick = ticks_;
    rep.input = clamp_to_workspace(raw_input, control);
    rep.commanded_velocity = stick_to_velocity(rep.input, control, state_.yaw);
    rep.u_ref = clamp_reference(reference_acceleration(rep.commanded_velocity, state_, control.dt), control.max_accel);
    rep.u_safe = rep.u_ref;

    switch (condition_) {
        case Condition::N:
            break;
        case Condition::PRF:
            rep.risk_report = assess_risk(state_, world_, config_.prf);
            rep.force = prf_force(*rep.risk_report, config_.prf);
            break;
        case Condition::CBF:
            rep.filter_result = filter(state_, rep.u_ref, barriers_, config_.filter);
            rep.u_safe = rep.filter_result->u_safe;
            rep.force = rep.filter_result->force;
            break;
    }
    rep.u_applied = (mode_ == Mode::Override && condition_ == Condition::CBF) ? rep.u_safe : rep.u_ref;

    const UAVState next = step(state_, rep.u_applied, rep.input.yaw_button, control);
    const bool nonzero = rep.commanded_velocity.x() != 0.0 || rep.commanded_velocity.y() != 0.0;
    const CollisionResult collision = collision_query(next.position, world_, config_.trial.crash);
    const TrialState trial = update_trial(trial_, next, nonzero, collision, world_, config_.trial, control.dt);

    rep.trial_started = trial_.phase == Phase::Idle && trial.phase != Phase::Idle;
    rep.target_reached = trial.next_target > trial_.next_target;
    rep.trial_ended = !trial_.terminal() && trial.terminal();

    const bool logging = trial_.phase == Phase::Running || rep.trial_started;
    if (logging) {
        samples_.push_back({state_.time, state_.position, state_.velocity, state_.yaw, rep.u_ref, rep.u_safe,
                            rep.force, collision_.kind != ContactKind::Clear, condition_});
        if (rep.trial_ended) {
            samples_.push_back({next.time, next.position, next.velocity, next.yaw, Vec2::Zero(), Vec2::Zero(),
                                Vec2::Zero(), collision.kind != ContactKind::Clear, condition_});
        }
    }

    if (collision.kind == ContactKind::Crash) ++crash_events_;
    rep.min_barrier = barriers_.min_value(next.position);
    min_barrier_ = std::min(min_barrier_, rep.min_barrier);

    state_ = next;
    trial_ = trial;
    collision_ = collision;
    last_force_ = rep.force;
    ++ticks_;

    rep.state = state_;
    rep.collision = collision;
    rep.trial = trial_;
    return rep;
}

TrialLog Simulation::make_log(std::size_t trial_index, std::uint64_t seed) const {
    TrialLog log;
    log.trial_index = trial_index;
    log.seed = seed;
    log.condition = condition_;
    log.mode = mode_;
    log.samples = samples_;
    if (samples_.size() >= 2) log.metrics = compute_metrics(samples_);
    log.outcome = trial_.phase == Phase::Succeeded ? Outcome::Success : Outcome::Failure;
    log.reason = trial_.reason;
    log.min_barrier = min_barrier_;
    log.crash_events = crash_events_;
    return log;
}

}  // namespace cbft
