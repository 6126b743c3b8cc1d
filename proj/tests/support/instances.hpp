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
// Random filter instances over a world, shared by the unit and acceptance suites.
#ifndef CBFT_TESTS_INSTANCES_HPP
#define CBFT_TESTS_INSTANCES_HPP

#include "support/oracles.hpp"

namespace cbft::testing {

struct FilterInstance {
    UAVState state;
    Vec2 u_ref;
    double p = 2.0;
};

inline FilterInstance random_instance(const World& world, std::mt19937_64& rng, double max_speed = 2.5,
                                      double max_accel = 20.0) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> gain(0.5, 4.0);
    FilterInstance inst;
    inst.state.position = oracle::sample_free_position(world, rng);
    inst.state.velocity = clamp_norm(Vec2(unit(rng), unit(rng)) * max_speed, max_speed);
    inst.u_ref = clamp_norm(Vec2(unit(rng), unit(rng)) * max_accel, max_accel);
    inst.p = gain(rng);
    return inst;
}

/// Largest KKT residual of a non-relaxed filter result, with each row normalized by |a|
/// so the residuals are in m/s^2 whatever the barrier's scale.
struct KktResiduals {
    double primal = 0.0;         ///< worst constraint violation
    double dual = 0.0;           ///< worst negative multiplier
    double stationarity = 0.0;   ///< |u_safe - u_ref - sum lambda a|
    double complementarity = 0.0;
    double worst() const { return std::max({primal, dual, stationarity, complementarity}); }
};

inline KktResiduals kkt(const FilterResult& res, std::span<const ConstraintRow> rows) {
    KktResiduals k;
    for (const auto& r : rows) {
        const double n = std::max(r.a.norm(), 1e-300);
        k.primal = std::max(k.primal, -(r.a.dot(res.u_safe) + r.c) / n);
    }
    Vec2 combo = Vec2::Zero();
    for (std::size_t j = 0; j < res.active_set.size(); ++j) {
        const auto& r = rows[res.active_set[j]];
        const double n = std::max(r.a.norm(), 1e-300);
        const double lambda_n = res.multipliers[j] * n;  // multiplier of the normalized row
        k.dual = std::max(k.dual, -lambda_n);
        combo += lambda_n * (r.a / n);
        k.complementarity = std::max(k.complementarity, std::abs(lambda_n * (r.a.dot(res.u_safe) + r.c) / n));
    }
    k.stationarity = (res.u_safe - res.u_ref - combo).norm();
    return k;
}

}  // namespace cbft::testing

#endif  // CBFT_TESTS_INSTANCES_HPP
