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
#ifndef CBFT_SIMULATION_HPP
#define CBFT_SIMULATION_HPP

#include "cbft/barriers.hpp"
#include "cbft/config.hpp"
#include "cbft/dynamics.hpp"
#include "cbft/prf.hpp"
#include "cbft/safety_filter.hpp"
#include "cbft/trial.hpp"
#include "cbft/world.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cbft {

/// Everything one control period produced.
struct TickReport {
    std::uint64_t tick = 0;
    UAVState state;  ///< after the step
    StickInput input;
    Vec2 commanded_velocity{0.0, 0.0};
    Vec2 u_ref{0.0, 0.0};
    Vec2 u_safe{0.0, 0.0};
    Vec2 u_applied{0.0, 0.0};
    Vec2 force{0.0, 0.0};
    std::optional<FilterResult> filter_result;
    std::optional<RiskReport> risk_report;
    CollisionResult collision;
    TrialState trial;
    double min_barrier = 0.0;
    bool trial_started = false;
    bool target_reached = false;
    bool trial_ended = false;
};

/// One UAV, one trial: stick -> reference acceleration -> saturation -> condition-specific
/// feedback -> integration -> collision and trial bookkeeping -> log. Batch runs and live
/// sessions share this loop.
class Simulation {
public:
    Simulation(World world, Condition condition, Mode mode, PipelineConfig config);

    TickReport tick(const StickInput& raw_input);

    const World& world() const { return world_; }
    const BarrierSet& barriers() const { return barriers_; }
    const PipelineConfig& config() const { return config_; }
    Condition condition() const { return condition_; }
    Mode mode() const { return mode_; }
    const UAVState& state() const { return state_; }
    const TrialState& trial() const { return trial_; }
    const std::vector<Sample>& samples() const { return samples_; }
    const Vec2& last_force() const { return last_force_; }
    std::uint64_t ticks() const { return ticks_; }
    double min_barrier() const { return min_barrier_; }
    std::size_t crash_events() const { return crash_events_; }

    /// Metrics are filled when at least two samples were logged.
    TrialLog make_log(std::size_t trial_index, std::uint64_t seed) const;

private:
    World world_;
    BarrierSet barriers_;
    Condition condition_;
    Mode mode_;
    PipelineConfig config_;
    UAVState state_;
    TrialState trial_;
    CollisionResult collision_;
    std::vector<Sample> samples_;
    Vec2 last_force_{0.0, 0.0};
    std::uint64_t ticks_ = 0;
    double min_barrier_;
    std::size_t crash_events_ = 0;
};

}  // namespace cbft

#endif  // CBFT_SIMULATION_HPP
