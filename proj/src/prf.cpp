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
#include "cbft/prf.hpp"

#include <stdexcept>

namespace cbft {

void validate(const PrfConfig& cfg) {
    if (!(cfg.boundary_width > 0.0)) throw std::invalid_argument("prf.boundary_width must be > 0");
    if (!(cfg.force_gain > 0.0)) throw std::invalid_argument("prf.force_gain must be > 0");
    if (!(cfg.force_gain <= cfg.max_force)) {
        throw std::invalid_argument("prf.force_gain must not exceed prf.max_force (risk 1 is full force)");
    }
}

std::vector<ObstacleClearance> critical_distance(const UAVState& state, const World& world) {
    const Vec2& q = state.position;
    const double r = world.uav_radius;
    std::vector<ObstacleClearance> out;
    out.reserve(obstacle_count(world));

    const double wall_gap[4] = {q.x() - world.outer.min.x(), world.outer.max.x() - q.x(),
                                q.y() - world.outer.min.y(), world.outer.max.y() - q.y()};
    const Vec2 wall_normal[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
    for (std::size_t i = 0; i < 4; ++i) {
        out.push_back({i, std::max(0.0, wall_gap[i] - r), wall_normal[i]});
    }

    for (std::size_t i = 0; i < world.inner.size(); ++i) {
        const Rect& rect = world.inner[i];
        ObstacleClearance c{4 + i, 0.0, {0.0, 0.0}};
        const Vec2 offset = q - rect.closest_point(q);
        const double dist = offset.norm();
        if (dist > 0.0) {
            c.distance = std::max(0.0, dist - r);
            c.away = offset / dist;
        } else {
            // Center inside the rectangle: leave through the nearest face.
            const Vec2 lo = q - rect.min;
            const Vec2 hi = rect.max - q;
            const double faces[4] = {lo.x(), hi.x(), lo.y(), hi.y()};
            const Vec2 dirs[4] = {{-1.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, {0.0, 1.0}};
            std::size_t best = 0;
            for (std::size_t f = 1; f < 4; ++f) {
                if (faces[f] < faces[best]) best = f;
            }
            c.away = dirs[best];
        }
        out.push_back(c);
    }
    return out;
}

double risk(double distance, const PrfConfig& cfg) {
    const double d = std::max(0.0, distance);
    if (d >= cfg.boundary_width) return 0.0;
    const double value = std::cos(d / cfg.boundary_width * M_PI_2 + M_PI_2) + 1.0;
    return std::clamp(value, 0.0, 1.0);
}

RiskReport assess_risk(const UAVState& state, const World& world, const PrfConfig& cfg) {
    RiskReport report;
    for (const auto& c : critical_distance(state, world)) {
        const double value = risk(c.distance, cfg);
        if (value > report.risk) {
            report.risk = value;
            report.direction = c.away;
            report.worst_obstacle = c.obstacle;
            report.distance = c.distance;
        }
    }
    return report;
}

Vec2 prf_force(const RiskReport& report, const PrfConfig& cfg) {
    if (report.risk <= 0.0) return Vec2::Zero();
    return clamp_norm(cfg.force_gain * report.risk * report.direction, cfg.max_force);
}

Vec2 prf_force(const UAVState& state, const World& world, const PrfConfig& cfg) {
    return prf_force(assess_risk(state, world, cfg), cfg);
}

}  // namespace cbft
