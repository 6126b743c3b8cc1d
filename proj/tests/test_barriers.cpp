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

#include "support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace cbft;

namespace {

World hallway() { return load_world(CBFT_SOURCE_DIR "/data/worlds/hallway.json"); }

World box_world(double w, double h) {
    World world;
    world.outer = {{0.0, 0.0}, {w, h}};
    world.start.position = {w / 2, h / 2};
    world.targets = {{{w / 2, h / 2}, 0.25}};
    return world;
}

}  // namespace

TEST_CASE("half-plane value, gradient and hessian") {
    const HalfPlaneBarrier left({1.0, 0.0}, 0.0);
    CHECK(left.value({0.7, 3.0}) == doctest::Approx(0.7).epsilon(1e-15));
    const HalfPlaneBarrier bottom({0.0, 1.0}, 2.0);
    CHECK(bottom.gradient({5.0, -3.0}) == Vec2(0.0, 1.0));
    CHECK(bottom.hessian({1.0, 1.0}) == Mat2::Zero());
    CHECK_THROWS_AS(HalfPlaneBarrier({1.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HalfPlaneBarrier({1.0 + 1e-9, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("superellipsoid boundary and center values") {
    const SuperEllipsoidBarrier s({0.0, 0.0}, 1.5, 1.0, 0.25);
    CHECK(s.value({1.5, 0.0}) == 0.0);
    CHECK(s.value({0.0, 0.0}) == -1.0);
    CHECK(s.exponent_x() == 12.0);
    CHECK(s.exponent_y() == 8.0);
    for (const Vec2& q : {Vec2(1.5, 0.0), Vec2(-1.5, 0.0), Vec2(0.0, 1.0), Vec2(0.0, -1.0)}) CHECK(s.value(q) == 0.0);
    CHECK(s.gradient({0.0, 0.0}) == Vec2::Zero());
    CHECK(s.hessian({0.0, 0.0}) == Mat2::Zero());
}

TEST_CASE("superellipsoid derivative examples against finite differences") {
    const SuperEllipsoidBarrier s({0.0, 0.0}, 1.0, 1.0, 0.25);
    const Vec2 q(1.0, 0.0);
    auto value = [&](const Vec2& x) { return s.value(x); };
    auto gradient = [&](const Vec2& x) { return s.gradient(x); };
    const Vec2 g_fd = oracle::fd_gradient(value, q, 1e-6);
    CHECK(g_fd.x() == doctest::Approx(8.0).epsilon(1e-6));
    CHECK(std::abs(g_fd.y()) < 1e-9);
    CHECK(s.gradient(q).x() == doctest::Approx(8.0).epsilon(1e-14));
    const Mat2 h_fd = oracle::fd_jacobian(gradient, q, 1e-5);
    CHECK(h_fd(0, 0) == doctest::Approx(56.0).epsilon(1e-6));
    CHECK(std::abs(h_fd(0, 1)) < 1e-9);
    CHECK(s.hessian(q)(0, 0) == doctest::Approx(56.0).epsilon(1e-14));
    CHECK(s.hessian(q)(0, 1) == 0.0);
}

TEST_CASE("value matches the direct formula") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    const SuperEllipsoidBarrier s({0.5, -0.2}, 0.9, 2.6, 0.25);
    for (int i = 0; i < 500; ++i) {
        const Vec2 q(u(rng), u(rng));
        const double ref = oracle::superellipsoid_direct(q, {0.5, -0.2}, 0.9, 2.6, 0.25);
        CHECK(s.value(q) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("gradients and hessians match finite differences over the hallway") {
    const World world = hallway();
    const BarrierSet set = world_to_barriers(world);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(world.outer.min.x(), world.outer.max.x());
    std::uniform_real_distribution<double> uy(world.outer.min.y(), world.outer.max.y());
    double worst_g = 0.0, worst_h = 0.0, worst_sym = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vec2 q(ux(rng), uy(rng));
        for (std::size_t k = 0; k < set.size(); ++k) {
            auto value = [&](const Vec2& x) { return barrier_value(set[k], x); };
            auto gradient = [&](const Vec2& x) { return barrier_gradient(set[k], x); };
            worst_g = std::max(worst_g, oracle::rel_error(barrier_gradient(set[k], q), oracle::fd_gradient(value, q, 1e-5)));
            const Mat2 h = barrier_hessian(set[k], q);
            worst_h = std::max(worst_h, oracle::rel_error(h, oracle::fd_jacobian(gradient, q, 1e-5)));
            worst_sym = std::max(worst_sym, (h - h.transpose()).lpNorm<Eigen::Infinity>());
        }
    }
    CHECK(worst_g <= 1e-5);
    CHECK(worst_h <= 1e-4);
    CHECK(worst_sym <= 1e-12);
}

TEST_CASE("large exponents stay finite and differentiable") {
    // A 20 m long wall segment gives exponent 2a/r of about 162.
    const SuperEllipsoidBarrier s({0.0, 0.0}, 20.25, 0.75, 0.25);
    CHECK(s.exponent_x() > 50.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-30.0, 30.0), uy(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        const Vec2 q(ux(rng), uy(rng));
        const double v = s.value(q);
        CHECK(std::isfinite(v));
        CHECK(is_finite(s.gradient(q)));
        CHECK(s.hessian(q).allFinite());
        if (std::abs(q.x()) < 20.0) {
            const double ref = oracle::superellipsoid_direct(q, Vec2::Zero(), 20.25, 0.75, 0.25);
            CHECK(v == doctest::Approx(ref).epsilon(1e-9));
            auto value = [&](const Vec2& x) { return s.value(x); };
            CHECK(oracle::rel_error(s.gradient(q), oracle::fd_gradient(value, q, 1e-5)) <= 1e-5);
        }
    }
    // Far outside, the clipped log term keeps the value finite instead of overflowing.
    CHECK(std::isfinite(s.value({1e6, 0.0})));
    CHECK(s.value({1e6, 0.0}) > 1e300);
}

TEST_CASE("world_to_barriers layout") {
    const BarrierSet b = world_to_barriers(box_world(10.0, 10.0));
    REQUIRE(b.size() == 4);
    CHECK(barrier_value(b[0], {0.7, 3.0}) == doctest::Approx(0.45).epsilon(1e-15));  // left: x - 0.25
    CHECK(barrier_value(b[1], {9.0, 3.0}) == doctest::Approx(0.75).epsilon(1e-15));  // right
    CHECK(barrier_value(b[2], {3.0, 1.0}) == doctest::Approx(0.75).epsilon(1e-15));  // bottom
    CHECK(barrier_value(b[3], {3.0, 9.5}) == doctest::Approx(0.25).epsilon(1e-15));  // top
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::holds_alternative<HalfPlaneBarrier>(b[i]));

    const World world = hallway();
    const BarrierSet h = world_to_barriers(world);
    REQUIRE(h.size() == 7);
    const auto& s = std::get<SuperEllipsoidBarrier>(h[4]);
    CHECK(s.center() == world.inner[0].center());
    CHECK(s.half_length() == doctest::Approx(world.inner[0].half_extents().x() + 0.25).epsilon(1e-15));
    CHECK(s.half_width() == doctest::Approx(2.5 + 0.25).epsilon(1e-15));
    CHECK(h.min_value({1.0, 1.0}) == doctest::Approx(0.75));
    CHECK(std::isinf(BarrierSet{}.min_value({0.0, 0.0})));
}

TEST_CASE("world_to_barriers rejects an inner rectangle touching the outer boundary") {
    World w = box_world(10.0, 10.0);
    w.inner.push_back({{0.3, 2.0}, {3.0, 4.0}});
    CHECK_THROWS_AS(world_to_barriers(w), WorldError);
    w.inner.back() = {{0.0, 2.0}, {3.0, 4.0}};
    CHECK_THROWS_AS(world_to_barriers(w), WorldError);
}

TEST_CASE("a collision-free disk has a positive superellipsoid value") {
    const World world = hallway();
    const BarrierSet set = world_to_barriers(world);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(world.outer.min.x(), world.outer.max.x());
    std::uniform_real_distribution<double> uy(world.outer.min.y(), world.outer.max.y());
    int clear_points = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec2 q(ux(rng), uy(rng));
        for (std::size_t k = 0; k < world.inner.size(); ++k) {
            const double clearance = oracle::rect_clearance_sampled(q, world.inner[k], 200);
            if (clearance > world.uav_radius + 1e-3) {
                ++clear_points;
                CHECK(barrier_value(set[4 + k], q) > 0.0);
            }
        }
    }
    CHECK(clear_points > 20000);
}

TEST_CASE("non-negative superellipsoid value bounds corner penetration") {
    // b >= 0 does not imply a clear disk: near the rectangle corners the level set cuts
    // inside the Minkowski sum. The overlap there stays below a tenth of the UAV radius.
    const World world = hallway();
    const BarrierSet set = world_to_barriers(world);
    std::mt19937_64 rng(23);
    double worst = 0.0;
    for (std::size_t k = 0; k < world.inner.size(); ++k) {
        const Rect& rect = world.inner[k];
        std::uniform_real_distribution<double> ux(rect.min.x() - 0.5, rect.max.x() + 0.5);
        std::uniform_real_distribution<double> uy(rect.min.y() - 0.5, rect.max.y() + 0.5);
        for (int i = 0; i < 20000; ++i) {
            const Vec2 q(ux(rng), uy(rng));
            if (barrier_value(set[4 + k], q) < 0.0) continue;
            worst = std::max(worst, world.uav_radius - oracle::rect_clearance_sampled(q, rect, 200));
        }
    }
    CHECK(worst > 0.0);
    CHECK(worst <= 0.025);
}

TEST_CASE("half-plane safe set equals the center clearance test") {
    const World world = box_world(8.0, 6.0);
    const BarrierSet set = world_to_barriers(world);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ux(0.0, 8.0), uy(0.0, 6.0);
    for (int i = 0; i < 10000; ++i) {
        const Vec2 q(ux(rng), uy(rng));
        const bool barrier_safe = set.min_value(q) >= 0.0;
        const bool clear = collision_query(q, world).kind == ContactKind::Clear;
        if (std::abs(set.min_value(q)) > 1e-5) CHECK(barrier_safe == clear);
    }
}
