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
#ifndef CBFT_PILOTS_HPP
#define CBFT_PILOTS_HPP

#include "cbft/dynamics.hpp"
#include "cbft/world.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace cbft {

/// Scripted stand-ins for a human operator.
enum class PilotKind {
    WaypointFollower,   ///< tracks the corridor centerline
    WallCharger,        ///< full stick toward the nearest wall, forever
    NoisyFollower,      ///< follower plus correlated stick noise
    CompliantFollower,  ///< noisy follower whose hand yields to the rendered force
};

const char* to_string(PilotKind kind);
PilotKind parse_pilot_kind(std::string_view text);  ///< throws std::invalid_argument

struct PilotSpec {
    PilotKind kind = PilotKind::WaypointFollower;
    double gain = 1.5;          ///< 1/s, speed per meter of remaining route near the end
    double cruise_speed = 1.0;  ///< m/s
    double lookahead = 0.6;     ///< m along the route
    double noise_std = 0.0;     ///< cm, stationary std of the stick noise
    double noise_time_constant = 0.5;  ///< s, correlation time of the stick noise
    double hand_admittance = 0.0;      ///< cm of stick displacement per N of force
    double hand_time_constant = 0.0;   ///< s; 0 makes the hand yield instantly
    double visual_delay = 0.0;         ///< s, age of the position the route tracking acts on
    std::uint64_t seed = 1;
};

void validate(const PilotSpec& spec);

/// Parameters used by the batch runs when only the kind is given. The noisy and compliant
/// pilots fly at 2 m/s, track the route 0.35 s late and carry 1 cm of stick noise; the
/// compliant hand yields 1 cm/N through a 0.15 s lag.
PilotSpec pilot_preset(PilotKind kind);

class Pilot {
public:
    Pilot(PilotSpec spec, const World& world, ControlConfig control);

    /// Stick reading for this period given the force felt during the previous one.
    StickInput step(const UAVState& state, const Vec2& force, const World& world, std::mt19937_64& rng);

    const PilotSpec& spec() const { return spec_; }
    /// Index of the target the pilot believes comes next.
    std::size_t next_target() const { return next_target_; }
    /// Velocity the nominal (noise- and force-free) pilot is asking for.
    Vec2 nominal_velocity(const UAVState& state);

private:
    Vec2 route_velocity(const Vec2& position);
    Vec2 target_velocity(const Vec2& position);

    PilotSpec spec_;
    ControlConfig control_;
    std::vector<Target> targets_;
    std::vector<std::vector<Vec2>> legs_;  ///< route split at each target, plus the tail
    std::size_t leg_ = 0;
    std::size_t segment_ = 0;
    std::size_t next_target_ = 0;
    Vec2 noise_{0.0, 0.0};
    Vec2 hand_offset_{0.0, 0.0};
    std::optional<Vec2> charge_direction_;
    std::deque<Vec2> seen_;
};

inline StickInput pilot_step(Pilot& pilot, const UAVState& state, const Vec2& force, const World& world,
                             std::mt19937_64& rng) {
    return pilot.step(state, force, world, rng);
}

}  // namespace cbft

#endif  // CBFT_PILOTS_HPP
