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
#ifndef CBFT_BARRIERS_HPP
#define CBFT_BARRIERS_HPP

#include "cbft/geometry.hpp"
#include "cbft/world.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace cbft {

/// Linear barrier b(q) = n . q - offset with unit normal n pointing into the safe side.
class HalfPlaneBarrier {
public:
    HalfPlaneBarrier(const Vec2& normal, double offset);

    double value(const Vec2& q) const { return normal_.dot(q) - offset_; }
    Vec2 gradient(const Vec2&) const { return normal_; }
    Mat2 hessian(const Vec2&) const { return Mat2::Zero(); }

    const Vec2& normal() const { return normal_; }
    double offset() const { return offset_; }

private:
    Vec2 normal_;
    double offset_;
};

/// Superellipsoid level set around an axis-aligned rectangle inflated by the UAV radius:
///
///   b(q) = (|x'|/a)^(2a/r) + (|y'|/b)^(2b/r) - 1,   (x', y') = q - center
///
/// negative inside, zero on the boundary. Exponents are floored at 2 so b is C2.
class SuperEllipsoidBarrier {
public:
    SuperEllipsoidBarrier(const Vec2& center, double half_length, double half_width, double uav_radius);

    double value(const Vec2& q) const;
    Vec2 gradient(const Vec2& q) const;
    Mat2 hessian(const Vec2& q) const;

    const Vec2& center() const { return center_; }
    double half_length() const { return a_; }
    double half_width() const { return b_; }
    double uav_radius() const { return r_; }
    double exponent_x() const { return nx_; }
    double exponent_y() const { return ny_; }

private:
    Vec2 center_;
    double a_;
    double b_;
    double r_;
    double nx_;
    double ny_;
};

using Barrier = std::variant<HalfPlaneBarrier, SuperEllipsoidBarrier>;

double barrier_value(const Barrier& barrier, const Vec2& q);
Vec2 barrier_gradient(const Barrier& barrier, const Vec2& q);
Mat2 barrier_hessian(const Barrier& barrier, const Vec2& q);

/// Ordered barriers; index i corresponds to obstacle i of the generating world.
struct BarrierSet {
    std::vector<Barrier> barriers;

    std::size_t size() const { return barriers.size(); }
    bool empty() const { return barriers.empty(); }
    const Barrier& operator[](std::size_t i) const { return barriers[i]; }

    /// Smallest barrier value at q; +inf for an empty set.
    double min_value(const Vec2& q) const;
};

/// Four inset half-planes for the outer walls followed by one superellipsoid per
/// inner rectangle. Throws WorldError for invalid worlds.
BarrierSet world_to_barriers(const World& world);

}  // namespace cbft

#endif  // CBFT_BARRIERS_HPP
