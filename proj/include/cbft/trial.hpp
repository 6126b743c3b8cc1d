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
#ifndef CBFT_TRIAL_HPP
#define CBFT_TRIAL_HPP

#include "cbft/dynamics.hpp"
#include "cbft/world.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cbft {

/// Haptic feedback condition: none, parametric risk field, or barrier-function filter.
enum class Condition { N, PRF, CBF };
/// haptic_only applies the operator's reference; override applies the filtered input.
enum class Mode { HapticOnly, Override };

const char* to_string(Condition c);
const char* to_string(Mode m);
Condition parse_condition(std::string_view text);  ///< throws std::invalid_argument
Mode parse_mode(std::string_view text);

enum class Phase { Idle, Running, Succeeded, Failed };
enum class FailureReason { None, Crash, ContactTimeout, Timeout };

const char* to_string(Phase p);
Phase parse_phase(std::string_view text);
const char* to_string(FailureReason r);
FailureReason parse_failure_reason(std::string_view text);

struct TrialConfig {
    CrashConfig crash;
    double timeout = 300.0;  ///< simulated seconds after the trial starts
};

void validate(const TrialConfig& cfg);

struct TrialState {
    Phase phase = Phase::Idle;
    std::size_t next_target = 0;
    bool contact = false;
    double crash_timer = 0.0;  ///< continuous contact time, s
    double start_time = 0.0;
    double end_time = 0.0;
    FailureReason reason = FailureReason::None;

    bool terminal() const { return phase == Phase::Succeeded || phase == Phase::Failed; }
};

/// Advances the trial state machine for one control period. `state` is the UAV state
/// after the step; `input_nonzero` tells whether this period's velocity command was
/// non-zero. Terminal trials are returned unchanged.
TrialState update_trial(const TrialState& trial, const UAVState& state, bool input_nonzero,
                        const CollisionResult& collision, const World& world, const TrialConfig& cfg, double dt);

/// UAV state at time t plus the commands applied over the following period.
struct Sample {
    double t = 0.0;
    Vec2 position{0.0, 0.0};
    Vec2 velocity{0.0, 0.0};
    double yaw = 0.0;
    Vec2 u_ref{0.0, 0.0};
    Vec2 u_safe{0.0, 0.0};
    Vec2 force{0.0, 0.0};
    bool contact = false;
    Condition condition = Condition::N;
};

struct Metrics {
    double total_distance = 0.0;  ///< m
    double trial_time = 0.0;      ///< s
    double average_speed = 0.0;   ///< m/s
    double collision_time = 0.0;  ///< s in contact with a wall

    bool operator==(const Metrics&) const = default;
};

class LogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws LogError for fewer than two samples or decreasing timestamps.
Metrics compute_metrics(std::span<const Sample> samples);

enum class Outcome { Success, Failure };
const char* to_string(Outcome o);

struct TrialLog {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    Condition condition = Condition::N;
    Mode mode = Mode::HapticOnly;
    std::vector<Sample> samples;
    Metrics metrics;
    Outcome outcome = Outcome::Failure;
    FailureReason reason = FailureReason::None;
    double min_barrier = 0.0;  ///< smallest barrier value along the trajectory
    std::size_t crash_events = 0;
};

}  // namespace cbft

#endif  // CBFT_TRIAL_HPP
