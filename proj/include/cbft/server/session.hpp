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
#ifndef CBFT_SERVER_SESSION_HPP
#define CBFT_SERVER_SESSION_HPP

#include "cbft/server/messages.hpp"
#include "cbft/simulation.hpp"

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace cbft::server {

/// Latest-value mailbox: a newer sequence number replaces the held input, older ones are dropped.
class InputMailbox {
public:
    /// Returns false when `msg` is not newer than what was already accepted.
    bool offer(const InputMessage& msg, double now);
    /// Forget the sequence history, e.g. when a new client connects.
    void reset_sequence();

    struct Held {
        InputMessage msg;
        double received = 0.0;
    };
    std::optional<Held> latest() const;

private:
    mutable std::mutex mutex_;
    std::optional<Held> held_;
    std::optional<std::uint64_t> last_seq_;
};

/// Output of one live tick: telemetry plus any trial events it raised.
struct SessionTick {
    TelemetryMessage telemetry;
    std::vector<TrialEventMessage> events;
};

/// One live trial. Time is passed in by the caller so tests can drive a fake clock.
class Session {
public:
    Session(std::uint64_t id, std::string world_name, World world, Condition condition, Mode mode,
            PipelineConfig config);

    std::uint64_t id() const { return id_; }
    const std::string& world_name() const { return world_name_; }
    const Simulation& simulation() const { return sim_; }

    bool submit_input(const InputMessage& msg, double now) { return mailbox_.offer(msg, now); }

    void client_connected(double now);
    void client_disconnected(double now);
    int clients() const { return clients_; }

    /// Stick the pipeline sees at `now`: the held input, faded out once stale.
    StickInput input_at(double now) const;
    /// No clients for longer than the grace period.
    bool paused(double now) const;

    /// Advances one period; nothing happens (and nullopt is returned) while paused.
    std::optional<SessionTick> tick(double now);

    TrialLog log() const { return sim_.make_log(0, id_); }
    /// Whole log as JSON lines, summary last.
    std::string log_jsonl() const;

private:
    TelemetryMessage telemetry(const TickReport& rep, std::uint64_t input_seq, double input_client_time) const;

    std::uint64_t id_;
    std::string world_name_;
    Simulation sim_;
    ServerConfig server_;
    InputMailbox mailbox_;
    int clients_ = 0;
    std::optional<double> alone_since_;
};

}  // namespace cbft::server

#endif  // CBFT_SERVER_SESSION_HPP
