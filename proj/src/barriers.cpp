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
#include "cbft/barriers.hpp"

#include <limits>
#include <stdexcept>

namespace cbft {

namespace {

// Above this exponent the power terms are evaluated as exp(k log t).
constexpr double kLogSpaceExponent = 50.0;
// exp(700) is still finite in double precision.
constexpr double kMaxLogTerm = 700.0;

/// t^k for t >= 0 and k >= 0, with pow(0, 0) = 1.
double power(double t, double k, double exponent) {
    if (t == 0.0) return k == 0.0 ? 1.0 : 0.0;
    if (exponent > kLogSpaceExponent) return std::exp(std::min(k * std::log(t), kMaxLogTerm));
    return std::pow(t, k);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

HalfPlaneBarrier::HalfPlaneBarrier(const Vec2& normal, double offset) : normal_(normal), offset_(offset) {
    if (!is_finite(normal) || std::abs(normal.norm() - 1.0) > 1e-12 || !std::isfinite(offset)) {
        throw std::invalid_argument("HalfPlaneBarrier: normal must be a finite unit vector");
    }
}

SuperEllipsoidBarrier::SuperEllipsoidBarrier(const Vec2& center, double half_length, double half_width,
                                             double uav_radius)
    : center_(center), a_(half_length), b_(half_width), r_(uav_radius) {
    if (!is_finite(center) || !(a_ > 0.0) || !(b_ > 0.0) || !(r_ > 0.0) || !std::isfinite(a_) ||
        !std::isfinite(b_) || !std::isfinite(r_)) {
        throw std::invalid_argument("SuperEllipsoidBarrier: semi-axes and radius must be positive");
    }
    nx_ = std::max(2.0, 2.0 * a_ / r_);
    ny_ = std::max(2.0, 2.0 * b_ / r_);
}

double SuperEllipsoidBarrier::value(const Vec2& q) const {
    const double tx = std::abs(q.x() - center_.x()) / a_;
    const double ty = std::abs(q.y() - center_.y()) / b_;
    return power(tx, nx_, nx_) + power(ty, ny_, ny_) - 1.0;
}

Vec2 SuperEllipsoidBarrier::gradient(const Vec2& q) const {
    const double dx = q.x() - center_.x();
    const double dy = q.y() - center_.y();
    const double tx = std::abs(dx) / a_;
    const double ty = std::abs(dy) / b_;
    return {nx_ / a_ * power(tx, nx_ - 1.0, nx_) * sign(dx), ny_ / b_ * power(ty, ny_ - 1.0, ny_) * sign(dy)};
}

Mat2 SuperEllipsoidBarrier::hessian(const Vec2& q) const {
    const double tx = std::abs(q.x() - center_.x()) / a_;
    const double ty = std::abs(q.y() - center_.y()) / b_;
    Mat2 h = Mat2::Zero();
    h(0, 0) = nx_ * (nx_ - 1.0) / (a_ * a_) * power(tx, nx_ - 2.0, nx_);
    h(1, 1) = ny_ * (ny_ - 1.0) / (b_ * b_) * power(ty, ny_ - 2.0, ny_);
    return h;
}

double barrier_value(const Barrier& barrier, const Vec2& q) {
    return std::visit([&](const auto& b) { return b.value(q); }, barrier);
}

Vec2 barrier_gradient(const Barrier& barrier, const Vec2& q) {
    return std::visit([&](const auto& b) { return b.gradient(q); }, barrier);
}

Mat2 barrier_hessian(const Barrier& barrier, const Vec2& q) {
    return std::visit([&](const auto& b) { return b.hessian(q); }, barrier);
}

double BarrierSet::min_value(const Vec2& q) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : barriers) m = std::min(m, barrier_value(b, q));
    return m;
}

BarrierSet world_to_barriers(const World& world) {
    validate_world(world);
    const double r = world.uav_radius;
    const Rect& o = world.outer;
    BarrierSet set;
    set.barriers.reserve(obstacle_count(world));
    set.barriers.emplace_back(HalfPlaneBarrier({1.0, 0.0}, o.min.x() + r));
    set.barriers.emplace_back(HalfPlaneBarrier({-1.0, 0.0}, -(o.max.x() - r)));
    set.barriers.emplace_back(HalfPlaneBarrier({0.0, 1.0}, o.min.y() + r));
    set.barriers.emplace_back(HalfPlaneBarrier({0.0, -1.0}, -(o.max.y() - r)));
    for (const Rect& rect : world.inner) {
        const Vec2 half = rect.half_extents();
        set.barriers.emplace_back(SuperEllipsoidBarrier(rect.center(), half.x() + r, half.y() + r, r));
    }
    return set;
}

}  // namespace cbft
