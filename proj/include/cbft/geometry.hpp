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
#ifndef CBFT_GEOMETRY_HPP
#define CBFT_GEOMETRY_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace cbft {

/// Planar vector in the world frame (meters unless stated otherwise).
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline bool is_finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

/// Rescales `v` so that its norm does not exceed `limit`, keeping its direction.
inline Vec2 clamp_norm(const Vec2& v, double limit) {
    const double n = v.norm();
    if (n <= limit || n == 0.0) return v;
    return v * (limit / n);
}

inline Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double angle) {
    double a = std::remainder(angle, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

/// Axis-aligned rectangle given by its lower-left and upper-right corners.
struct Rect {
    Vec2 min{0.0, 0.0};
    Vec2 max{0.0, 0.0};

    Vec2 center() const { return 0.5 * (min + max); }
    Vec2 half_extents() const { return 0.5 * (max - min); }
    double width() const { return max.x() - min.x(); }
    double height() const { return max.y() - min.y(); }

    bool contains(const Vec2& q) const {
        return q.x() >= min.x() && q.x() <= max.x() && q.y() >= min.y() && q.y() <= max.y();
    }

    Vec2 closest_point(const Vec2& q) const {
        return {std::clamp(q.x(), min.x(), max.x()), std::clamp(q.y(), min.y(), max.y())};
    }

    /// Signed distance from `q` to the rectangle boundary: positive outside, negative inside.
    double signed_distance(const Vec2& q) const {
        const Vec2 d = (q - center()).cwiseAbs() - half_extents();
        const Vec2 outside = d.cwiseMax(0.0);
        return outside.norm() + std::min(std::max(d.x(), d.y()), 0.0);
    }
};

}  // namespace cbft

#endif  // CBFT_GEOMETRY_HPP
