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
#ifndef CBFT_DYNAMICS_HPP
#define CBFT_DYNAMICS_HPP

#include "cbft/geometry.hpp"

namespace cbft {

/// Planar pose and velocity of the simulated quadrotor. Height is fixed and not represented.
struct UAVState {
    Vec2 position{0.0, 0.0};
    Vec2 velocity{0.0, 0.0};
    double yaw = 0.0;   ///< radians, wrapped to (-pi, pi]
    double time = 0.0;  ///< seconds
};

/// Operator interface reading: stylus displacement in cm (x forward, y left) and
/// the yaw buttons (+1 counterclockwise, -1 clockwise).
struct StickInput {
    Vec2 displacement{0.0, 0.0};
    int yaw_button = 0;
};

enum class StickFrame { World, Body };

struct ControlConfig {
    double velocity_gain = 0.5;  ///< (m/s) per cm beyond the deadzone
    double dt = 0.02;
    double deadzone = 1.0;  ///< cm
    double yaw_rate = 0.038;  ///< rad/s while a yaw button is held
    StickFrame frame = StickFrame::Body;
    double workspace_radius = 8.0;  ///< cm
    double max_accel = 20.0;  ///< saturation applied to the reference acceleration, m/s^2
};

/// Throws std::invalid_argument when a field is out of range.
void validate(const ControlConfig& cfg);

/// Limits the stylus to the interface workspace and the yaw button to {-1, 0, 1}.
StickInput clamp_to_workspace(const StickInput& input, const ControlConfig& cfg);

/// Rate control: commanded world-frame velocity from stylus displacement.
Vec2 stick_to_velocity(const StickInput& input, const ControlConfig& cfg, double yaw);

/// Inverse of stick_to_velocity (outside the deadzone); used by scripted pilots.
Vec2 velocity_to_stick(const Vec2& velocity, const ControlConfig& cfg, double yaw);

/// Acceleration that reaches the commanded velocity in one control period.
Vec2 reference_acceleration(const Vec2& commanded_velocity, const UAVState& state, double dt);

Vec2 clamp_reference(const Vec2& u_ref, double u_max);

/// Exact zero-order-hold step of the double integrator; yaw integrates kinematically.
UAVState step(const UAVState& state, const Vec2& u, int yaw_button, const ControlConfig& cfg);

}  // namespace cbft

#endif  // CBFT_DYNAMICS_HPP
