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
#include "cbft/server/session.hpp"

#include "cbft/trial_log.hpp"

#include <algorithm>
#include <sstream>

namespace cbft::server {

bool InputMailbox::offer(const InputMessage& msg, double now) {
    std::lock_guard lock(mutex_);
    if (last_seq_ && msg.seq <= *last_seq_) return false;
    last_seq_ = msg.seq;
    held_ = Held{msg, now};
    return true;
}

void InputMailbox::reset_sequence() {
    std::lock_guard lock(mutex_);
    last_seq_.reset();
}

std::optional<InputMailbox::Held> InputMailbox::latest() const {
    std::lock_guard lock(mutex_);
    return held_;
}

Session::Session(std::uint64_t id, std::string world_name, World world, Condition condition, Mode mode,
                 PipelineConfig config)
    : id_(id),
      world_name_(std::move(world_name)),
      sim_(std::move(world), condition, mode, config),
      server_(config.server) {}

void Session::client_connected(double) {
    ++clients_;
    alone_since_.reset();
    mailbox_.reset_sequence();
}

void Session::client_disconnected(double now) {
    clients_ = std::max(0, clients_ - 1);
    if (clients_ == 0) alone_since_ = now;
}

bool Session::paused(double now) const {
    return clients_ == 0 && alone_since_ && now - *alone_since_ > server_.disconnect_grace;
}

StickInput Session::input_at(double now) const {
    StickInput in;
    const auto held = mailbox_.latest();
    if (!held || (clients_ == 0 && alone_since_)) return in;
    const double age = now - held->received;
    double scale = 1.0;
    if (age > server_.stale_input) {
        scale = server_.input_decay > 0.0 ? std::max(0.0, 1.0 - (age - server_.stale_input) / server_.input_decay) : 0.0;
    } else {
        in.yaw_button = held->msg.yaw_button;
    }
    in.displacement = scale * sim_.config().control.workspace_radius * clamp_norm(held->msg.stick, 1.0);
    return in;
}

std::optional<SessionTick> Session::tick(double now) {
    if (paused(now)) return std::nullopt;
    const auto held = mailbox_.latest();
    const TickReport rep = sim_.tick(input_at(now));

    SessionTick out;
    out.telemetry = telemetry(rep, held ? held->msg.seq : 0, held ? held->msg.client_time : 0.0);
    const double t = rep.state.time;
    if (rep.trial_started) {
        out.events.push_back({id_, TrialEventKind::Started, t, 0, rep.trial.phase, FailureReason::None, 0});
    }
    if (rep.target_reached) {
        out.events.push_back(
            {id_, TrialEventKind::TargetReached, t, rep.trial.next_target - 1, rep.trial.phase, FailureReason::None, 0});
    }
    if (rep.trial_ended) {
        out.events.push_back({id_, TrialEventKind::Ended, t, 0, rep.trial.phase, rep.trial.reason, 0});
    }
    return out;
}

TelemetryMessage Session::telemetry(const TickReport& rep, std::uint64_t input_seq, double input_client_time) const {
    TelemetryMessage m;
    m.session = id_;
    m.tick = rep.tick;
    m.t = rep.state.time;
    m.position = rep.state.position;
    m.velocity = rep.state.velocity;
    m.yaw = rep.state.yaw;
    m.force = rep.force;
    m.u_ref = rep.u_ref;
    m.u_safe = rep.u_safe;
    if (rep.filter_result) m.margins = rep.filter_result->margins;
    m.risk = rep.risk_report;
    m.phase = rep.trial.phase;
    m.next_target = rep.trial.next_target;
    m.contact = rep.collision.kind != ContactKind::Clear;
    m.min_barrier = rep.min_barrier;
    if (sim_.samples().size() >= 2) m.metrics = compute_metrics(sim_.samples());
    m.input_seq = input_seq;
    m.input_client_time = input_client_time;
    return m;
}

std::string Session::log_jsonl() const {
    std::ostringstream out;
    write_jsonl(out, log());
    return out.str();
}

}  // namespace cbft::server
