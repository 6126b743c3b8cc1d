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
#ifndef CBFT_PRF_HPP
#define CBFT_PRF_HPP

#include "cbft/dynamics.hpp"
#include "cbft/world.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cbft {

/// Parametric risk field baseline.
struct PrfConfig {
    double boundary_width = 0.5;  ///< d0, m
    double force_gain = 3.3;      ///< K_PRF, N per unit risk
    double max_force = 3.3;       ///< N
};

void validate(const PrfConfig& cfg);

/// Clearance between one obstacle and the critical region (the UAV disk).
struct ObstacleClearance {
    std::size_t obstacle = 0;
    double distance = 0.0;     ///< m, clamped at 0 on penetration
    Vec2 away{0.0, 0.0};       ///< unit vector from the closest obstacle point toward the UAV
};

struct RiskReport {
    double risk = 0.0;
    Vec2 direction{0.0, 0.0};
    std::optional<std::size_t> worst_obstacle;
    double distance = 0.0;

    bool operator==(const RiskReport&) const = default;
};

/// One entry per obstacle, in world obstacle order.
std::vector<ObstacleClearance> critical_distance(const UAVState& state, const World& world);

/// cos((d/d0)(pi/2) + pi/2) + 1 on [0, d0), zero beyond.
double risk(double distance, const PrfConfig& cfg);

/// Highest-risk obstacle; ties go to the lower obstacle index.
RiskReport assess_risk(const UAVState& state, const World& world, const PrfConfig& cfg);

Vec2 prf_force(const UAVState& state, const World& world, const PrfConfig& cfg);
Vec2 prf_force(const RiskReport& report, const PrfConfig& cfg);

}  // namespace cbft

#endif  // CBFT_PRF_HPP
