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
#ifndef CBFT_SERVER_MESSAGES_HPP
#define CBFT_SERVER_MESSAGES_HPP

#include "cbft/geometry.hpp"
#include "cbft/prf.hpp"
#include "cbft/trial.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cbft::server {

/// Stick reading from the console. `stick` is normalized to the unit disk.
struct InputMessage {
    std::uint64_t seq = 0;
    Vec2 stick{0.0, 0.0};
    int yaw_button = 0;
    double client_time = 0.0;  ///< client clock, s; echoed for latency probes

    bool operator==(const InputMessage&) const = default;
};

struct TelemetryMessage {
    std::uint64_t session = 0;
    std::uint64_t tick = 0;
    double t = 0.0;
    Vec2 position{0.0, 0.0};
    Vec2 velocity{0.0, 0.0};
    double yaw = 0.0;
    Vec2 force{0.0, 0.0};
    Vec2 u_ref{0.0, 0.0};
    Vec2 u_safe{0.0, 0.0};
    std::vector<double> margins;  ///< per barrier, CBF only
    std::optional<RiskReport> risk;  ///< PRF only
    Phase phase = Phase::Idle;
    std::size_t next_target = 0;
    bool contact = false;
    double min_barrier = 0.0;
    Metrics metrics;
    std::uint64_t input_seq = 0;   ///< latest input applied this tick
    double input_client_time = 0.0;

    bool operator==(const TelemetryMessage&) const = default;
};

struct ConfigureMessage {
    std::string world = "hallway";  ///< world name in the server's worlds directory
    Condition condition = Condition::CBF;
    Mode mode = Mode::HapticOnly;

    bool operator==(const ConfigureMessage&) const = default;
};

enum class TrialEventKind { Started, TargetReached, Ended, SessionReady };

struct TrialEventMessage {
    std::uint64_t session = 0;
    TrialEventKind event = TrialEventKind::Started;
    double t = 0.0;
    std::size_t target = 0;  ///< TargetReached: index of the target just inspected
    Phase phase = Phase::Idle;
    FailureReason reason = FailureReason::None;
    std::size_t barriers = 0;  ///< SessionReady: number of active barriers

    bool operator==(const TrialEventMessage&) const = default;
};

struct ErrorMessage {
    std::string message;

    bool operator==(const ErrorMessage&) const = default;
};

using Message = std::variant<InputMessage, TelemetryMessage, ConfigureMessage, TrialEventMessage, ErrorMessage>;

class MessageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const char* to_string(TrialEventKind kind);
TrialEventKind parse_trial_event(std::string_view text);

/// JSON text with a `type` tag. Doubles are written in shortest round-trip form.
std::string encode(const Message& msg);
/// Throws MessageError on malformed JSON, unknown types, missing or mistyped fields.
Message decode(std::string_view text);

}  // namespace cbft::server

#endif  // CBFT_SERVER_MESSAGES_HPP
