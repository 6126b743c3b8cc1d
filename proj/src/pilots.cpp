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
#include "cbft/pilots.hpp"

#include "cbft/prf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cbft {

const char* to_string(PilotKind kind) {
    switch (kind) {
        case PilotKind::WaypointFollower: return "waypoint";
        case PilotKind::WallCharger: return "charger";
        case PilotKind::NoisyFollower: return "noisy";
        case PilotKind::CompliantFollower: return "compliant";
    }
    return "?";
}

PilotKind parse_pilot_kind(std::string_view text) {
    if (text == "waypoint" || text == "WaypointFollower") return PilotKind::WaypointFollower;
    if (text == "charger" || text == "WallCharger") return PilotKind::WallCharger;
    if (text == "noisy" || text == "NoisyFollower") return PilotKind::NoisyFollower;
    if (text == "compliant" || text == "CompliantFollower") return PilotKind::CompliantFollower;
    throw std::invalid_argument("unknown pilot '" + std::string(text) +
                                "' (expected waypoint, charger, noisy or compliant)");
}

void validate(const PilotSpec& spec) {
    if (!(spec.gain > 0.0)) throw std::invalid_argument("pilot.gain must be > 0");
    if (!(spec.cruise_speed > 0.0)) throw std::invalid_argument("pilot.cruise_speed must be > 0");
    if (!(spec.lookahead > 0.0)) throw std::invalid_argument("pilot.lookahead must be > 0");
    if (!(spec.noise_std >= 0.0)) throw std::invalid_argument("pilot.noise_std must be >= 0");
    if (!(spec.noise_time_constant > 0.0)) throw std::invalid_argument("pilot.noise_time_constant must be > 0");
    if (!(spec.hand_admittance >= 0.0)) throw std::invalid_argument("pilot.hand_admittance must be >= 0");
    if (!(spec.hand_time_constant >= 0.0)) throw std::invalid_argument("pilot.hand_time_constant must be >= 0");
    if (!(spec.visual_delay >= 0.0)) throw std::invalid_argument("pilot.visual_delay must be >= 0");
}

PilotSpec pilot_preset(PilotKind kind) {
    PilotSpec spec;
    spec.kind = kind;
    if (kind == PilotKind::NoisyFollower || kind == PilotKind::CompliantFollower) {
        spec.cruise_speed = 2.0;
        spec.visual_delay = 0.35;
        spec.noise_std = 1.0;
        spec.noise_time_constant = 0.7;
    }
    if (kind == PilotKind::CompliantFollower) {
        spec.hand_admittance = 1.0;
        spec.hand_time_constant = 0.15;
    }
    return spec;
}

namespace {

Vec2 project_on_segment(const Vec2& q, const Vec2& a, const Vec2& b, double* param = nullptr) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double s = len2 > 0.0 ? std::clamp((q - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    if (param) *param = s;
    return a + s * ab;
}

}  // namespace

Pilot::Pilot(PilotSpec spec, const World& world, ControlConfig control)
    : spec_(spec), control_(control), targets_(world.targets) {
    validate(spec_);
    std::vector<Vec2> route = world.route;
    if (route.empty()) route.push_back(world.start.position);

    // Split the route into one leg per target: each leg runs along the route from the
    // previous target's foot point to the next target and ends on the target itself.
    std::size_t seg = 0;
    Vec2 cursor = route.front();
    for (const Target& t : targets_) {
        std::size_t best_seg = seg;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = seg; j + 1 < route.size(); ++j) {
            const Vec2 foot = project_on_segment(t.center, j == seg ? cursor : route[j], route[j + 1]);
            const double d = (foot - t.center).norm();
            if (d < best) {
                best = d;
                best_seg = j;
            }
        }
        std::vector<Vec2> leg{cursor};
        for (std::size_t j = seg + 1; j <= best_seg && j < route.size(); ++j) leg.push_back(route[j]);
        if (route.size() > 1) {
            cursor = project_on_segment(t.center, best_seg == seg ? cursor : route[best_seg],
                                        route[std::min(best_seg + 1, route.size() - 1)]);
        }
        leg.push_back(t.center);
        legs_.push_back(std::move(leg));
        seg = best_seg;
    }
    std::vector<Vec2> tail{cursor};
    for (std::size_t j = seg + 1; j < route.size(); ++j) tail.push_back(route[j]);
    legs_.push_back(std::move(tail));
}

Vec2 Pilot::route_velocity(const Vec2& q) {
    const std::vector<Vec2>& path = legs_[leg_];
    if (path.size() == 1) {
        return clamp_norm(spec_.gain * (path.front() - q), spec_.cruise_speed);
    }
    // Advance past segments whose end we have reached or overshot.
    while (segment_ + 2 < path.size()) {
        double s = 0.0;
        project_on_segment(q, path[segment_], path[segment_ + 1], &s);
        if (s < 1.0 && (path[segment_ + 1] - q).norm() > 0.5 * spec_.lookahead) break;
        ++segment_;
    }

    // Carrot: lookahead distance past the projection, continuing onto later segments.
    double s = 0.0;
    Vec2 carrot = project_on_segment(q, path[segment_], path[segment_ + 1], &s);
    double remaining = spec_.lookahead;
    double along = (path[segment_ + 1] - carrot).norm();
    std::size_t seg = segment_;
    while (true) {
        if (remaining <= along) {
            carrot += remaining * (path[seg + 1] - path[seg]).normalized();
            break;
        }
        remaining -= along;
        carrot = path[seg + 1];
        if (++seg + 1 >= path.size()) break;
        along = (path[seg + 1] - path[seg]).norm();
    }

    double to_end = (path[segment_ + 1] - q).norm();
    for (std::size_t k = segment_ + 1; k + 1 < path.size(); ++k) to_end += (path[k + 1] - path[k]).norm();
    const double speed = std::min(spec_.cruise_speed, spec_.gain * to_end);
    const Vec2 heading = carrot - q;
    if (heading.norm() < 1e-9 || speed < 1e-9) return Vec2::Zero();
    return speed * heading.normalized();
}

Vec2 Pilot::target_velocity(const Vec2& q) {
    while (next_target_ < targets_.size() &&
           (q - targets_[next_target_].center).norm() <= targets_[next_target_].radius) {
        ++next_target_;
        leg_ = next_target_;
        segment_ = 0;
    }
    const Vec2 v = route_velocity(q);
    if (next_target_ >= targets_.size()) return v;
    // Close to the next target: fly straight over it, coming back if it was overshot.
    const Vec2 to_target = targets_[next_target_].center - q;
    const double dist = to_target.norm();
    if (dist > spec_.lookahead) return v;
    const double speed = std::min(spec_.cruise_speed, std::max(0.3, spec_.gain * dist));
    return speed * to_target / dist;
}

Vec2 Pilot::nominal_velocity(const UAVState& state) { return target_velocity(state.position); }

StickInput Pilot::step(const UAVState& state, const Vec2& force, const World& world, std::mt19937_64& rng) {
    StickInput input;
    if (spec_.kind == PilotKind::WallCharger) {
        if (!charge_direction_) {
            const auto clearances = critical_distance(state, world);
            std::size_t best = 0;
            for (std::size_t i = 1; i < clearances.size(); ++i) {
                if (clearances[i].distance < clearances[best].distance) best = i;
            }
            charge_direction_ = -clearances[best].away;
        }
        Vec2 dir = *charge_direction_;
        if (control_.frame == StickFrame::Body) dir = rotate(dir, -state.yaw);
        input.displacement = control_.workspace_radius * dir;
        return input;
    }

    // Route tracking reacts to where the UAV was visual_delay seconds ago.
    seen_.push_back(state.position);
    const auto lag = static_cast<std::size_t>(std::llround(spec_.visual_delay / control_.dt));
    while (seen_.size() > lag + 1) seen_.pop_front();
    const Vec2 v = target_velocity(seen_.front());
    input.displacement = velocity_to_stick(v, control_, state.yaw);

    if (spec_.kind == PilotKind::NoisyFollower || spec_.kind == PilotKind::CompliantFollower) {
        // Ornstein-Uhlenbeck drift with stationary std noise_std on each axis.
        const double decay = std::exp(-control_.dt / spec_.noise_time_constant);
        const double kick = spec_.noise_std * std::sqrt(1.0 - decay * decay);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double nx = normal(rng);
        const double ny = normal(rng);
        noise_ = decay * noise_ + kick * Vec2(nx, ny);
        input.displacement += noise_;
    }
    if (spec_.kind == PilotKind::CompliantFollower) {
        const Vec2 felt = control_.frame == StickFrame::Body ? rotate(force, -state.yaw) : force;
        const Vec2 target = spec_.hand_admittance * felt;
        if (spec_.hand_time_constant > 0.0) {
            // The hand yields to the force through a first-order lag.
            const double blend = 1.0 - std::exp(-control_.dt / spec_.hand_time_constant);
            hand_offset_ += blend * (target - hand_offset_);
        } else {
            hand_offset_ = target;
        }
        input.displacement += hand_offset_;
    }
    input.displacement = clamp_norm(input.displacement, control_.workspace_radius);
    return input;
}

}  // namespace cbft
