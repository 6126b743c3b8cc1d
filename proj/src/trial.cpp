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
#include "cbft/trial.hpp"

namespace cbft {

const char* to_string(Condition c) {
    switch (c) {
        case Condition::N: return "N";
        case Condition::PRF: return "PRF";
        case Condition::CBF: return "CBF";
    }
    return "?";
}

const char* to_string(Mode m) { return m == Mode::Override ? "override" : "haptic_only"; }

Condition parse_condition(std::string_view text) {
    if (text == "N" || text == "n" || text == "none") return Condition::N;
    if (text == "PRF" || text == "prf") return Condition::PRF;
    if (text == "CBF" || text == "cbf") return Condition::CBF;
    throw std::invalid_argument("unknown condition '" + std::string(text) + "' (expected N, PRF or CBF)");
}

Mode parse_mode(std::string_view text) {
    if (text == "haptic_only" || text == "haptic") return Mode::HapticOnly;
    if (text == "override") return Mode::Override;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected haptic_only or override)");
}

const char* to_string(Phase p) {
    switch (p) {
        case Phase::Idle: return "idle";
        case Phase::Running: return "running";
        case Phase::Succeeded: return "succeeded";
        case Phase::Failed: return "failed";
    }
    return "?";
}

const char* to_string(FailureReason r) {
    switch (r) {
        case FailureReason::None: return "none";
        case FailureReason::Crash: return "crash";
        case FailureReason::ContactTimeout: return "contact_timeout";
        case FailureReason::Timeout: return "timeout";
    }
    return "?";
}

Phase parse_phase(std::string_view text) {
    if (text == "idle") return Phase::Idle;
    if (text == "running") return Phase::Running;
    if (text == "succeeded") return Phase::Succeeded;
    if (text == "failed") return Phase::Failed;
    throw std::invalid_argument("unknown phase '" + std::string(text) + "'");
}

FailureReason parse_failure_reason(std::string_view text) {
    if (text == "none") return FailureReason::None;
    if (text == "crash") return FailureReason::Crash;
    if (text == "contact_timeout") return FailureReason::ContactTimeout;
    if (text == "timeout") return FailureReason::Timeout;
    throw std::invalid_argument("unknown failure reason '" + std::string(text) + "'");
}

const char* to_string(Outcome o) { return o == Outcome::Success ? "success" : "failure"; }

void validate(const TrialConfig& cfg) {
    if (!(cfg.crash.crash_depth > 0.0)) throw std::invalid_argument("trial.crash_depth must be > 0");
    if (!(cfg.crash.crash_duration > 0.0)) throw std::invalid_argument("trial.crash_duration must be > 0");
    if (!(cfg.crash.contact_tolerance >= 0.0) || !(cfg.crash.contact_tolerance < cfg.crash.crash_depth)) {
        throw std::invalid_argument("trial.contact_tolerance must lie in [0, crash_depth)");
    }
    if (!(cfg.timeout > 0.0)) throw std::invalid_argument("trial.timeout must be > 0");
}

TrialState update_trial(const TrialState& trial, const UAVState& state, bool input_nonzero,
                        const CollisionResult& collision, const World& world, const TrialConfig& cfg, double dt) {
    TrialState next = trial;
    if (trial.terminal()) return next;
    if (trial.phase == Phase::Idle) {
        if (!input_nonzero) return next;
        next.phase = Phase::Running;
        next.start_time = state.time - dt;
    }

    next.contact = collision.kind != ContactKind::Clear;
    next.crash_timer = next.contact ? next.crash_timer + dt : 0.0;

    auto finish = [&](Phase phase, FailureReason reason) {
        next.phase = phase;
        next.reason = reason;
        next.end_time = state.time;
    };

    if (collision.kind == ContactKind::Crash) {
        finish(Phase::Failed, FailureReason::Crash);
        return next;
    }
    // Summed dt drifts by an ulp per tick; 50 ticks of 0.02 s is exactly one second.
    if (next.crash_timer > cfg.crash.crash_duration + 1e-9) {
        finish(Phase::Failed, FailureReason::ContactTimeout);
        return next;
    }
    if (next.next_target < world.targets.size()) {
        const Target& t = world.targets[next.next_target];
        if ((state.position - t.center).norm() <= t.radius) ++next.next_target;
    }
    if (next.next_target >= world.targets.size()) {
        finish(Phase::Succeeded, FailureReason::None);
        return next;
    }
    if (state.time - next.start_time > cfg.timeout) finish(Phase::Failed, FailureReason::Timeout);
    return next;
}

Metrics compute_metrics(std::span<const Sample> samples) {
    if (samples.size() < 2) throw LogError("metrics need at least two samples");
    Metrics m;
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const double dt = samples[k].t - samples[k - 1].t;
        if (!(dt >= 0.0)) throw LogError("sample timestamps are not monotone at index " + std::to_string(k));
        m.total_distance += (samples[k].position - samples[k - 1].position).norm();
        if (samples[k - 1].contact) m.collision_time += dt;
    }
    m.trial_time = samples.back().t - samples.front().t;
    m.average_speed = m.trial_time > 0.0 ? m.total_distance / m.trial_time : 0.0;
    return m;
}

}  // namespace cbft
