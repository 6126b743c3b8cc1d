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
#include "cbft/dynamics.hpp"

#include <stdexcept>

namespace cbft {

void validate(const ControlConfig& cfg) {
    if (!(cfg.velocity_gain > 0.0)) throw std::invalid_argument("control.velocity_gain must be > 0");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("control.dt must be > 0");
    if (!(cfg.deadzone >= 0.0)) throw std::invalid_argument("control.deadzone must be >= 0");
    if (!(cfg.yaw_rate >= 0.0)) throw std::invalid_argument("control.yaw_rate must be >= 0");
    if (!(cfg.workspace_radius > cfg.deadzone)) {
        throw std::invalid_argument("control.workspace_radius must exceed the deadzone");
    }
    if (!(cfg.max_accel > 0.0)) throw std::invalid_argument("control.max_accel must be > 0");
}

StickInput clamp_to_workspace(const StickInput& input, const ControlConfig& cfg) {
    StickInput out;
    out.displacement = is_finite(input.displacement) ? clamp_norm(input.displacement, cfg.workspace_radius)
                                                     : Vec2::Zero();
    out.yaw_button = std::clamp(input.yaw_button, -1, 1);
    return out;
}

Vec2 stick_to_velocity(const StickInput& input, const ControlConfig& cfg, double yaw) {
    const double n = input.displacement.norm();
    if (n <= cfg.deadzone) return Vec2::Zero();
    Vec2 v = cfg.velocity_gain * (n - cfg.deadzone) / n * input.displacement;
    if (cfg.frame == StickFrame::Body) v = rotate(v, yaw);
    return v;
}

Vec2 velocity_to_stick(const Vec2& velocity, const ControlConfig& cfg, double yaw) {
    const double speed = velocity.norm();
    if (speed == 0.0) return Vec2::Zero();
    Vec2 dir = velocity / speed;
    if (cfg.frame == StickFrame::Body) dir = rotate(dir, -yaw);
    return (speed / cfg.velocity_gain + cfg.deadzone) * dir;
}

Vec2 reference_acceleration(const Vec2& commanded_velocity, const UAVState& state, double dt) {
    return (commanded_velocity - state.velocity) / dt;
}

Vec2 clamp_reference(const Vec2& u_ref, double u_max) { return clamp_norm(u_ref, u_max); }

UAVState step(const UAVState& s, const Vec2& u, int yaw_button, const ControlConfig& cfg) {
    const double dt = cfg.dt;
    UAVState next;
    next.position = s.position + s.velocity * dt + 0.5 * u * dt * dt;
    next.velocity = s.velocity + u * dt;
    next.yaw = wrap_angle(s.yaw + std::clamp(yaw_button, -1, 1) * cfg.yaw_rate * dt);
    next.time = s.time + dt;
    return next;
}

}  // namespace cbft
