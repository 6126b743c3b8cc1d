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
#include "cbft/safety_filter.hpp"

#include "cbft/small_qp.hpp"

#include <stdexcept>

namespace cbft {

void validate(const FilterConfig& cfg) {
    if (!(cfg.gain_p > 0.0)) throw std::invalid_argument("filter.p must be > 0");
    if (!(cfg.force_gain > 0.0)) throw std::invalid_argument("filter.force_gain must be > 0");
    if (!(cfg.max_force > 0.0)) throw std::invalid_argument("filter.max_force must be > 0");
    if (!(cfg.slack_weight > 0.0)) throw std::invalid_argument("filter.slack_weight must be > 0");
}

std::vector<ConstraintRow> assemble_constraints(const UAVState& state, const BarrierSet& barriers, double p) {
    std::vector<ConstraintRow> rows;
    rows.reserve(barriers.size());
    const Vec2& x = state.position;
    const Vec2& v = state.velocity;
    for (std::size_t i = 0; i < barriers.size(); ++i) {
        const Vec2 grad = barrier_gradient(barriers[i], x);
        const double curvature = v.dot(barrier_hessian(barriers[i], x) * v);
        const double rate = grad.dot(v);
        rows.push_back({grad, curvature + 2.0 * p * rate + p * p * barrier_value(barriers[i], x), i});
    }
    return rows;
}

FilterResult solve_qp(const Vec2& u_ref, std::span<const ConstraintRow> rows, const FilterConfig& cfg) {
    FilterResult res;
    res.u_ref = u_ref;

    std::vector<detail::LinearRow<2>> plain;
    plain.reserve(rows.size());
    for (const auto& r : rows) plain.push_back({r.a, r.c});

    const auto exact = detail::solve_by_enumeration<2>(u_ref, Vec2::Ones(), plain);
    res.degenerate = exact.degenerate;
    if (exact.found) {
        res.u_safe = exact.z;
        res.active_set = exact.active;
        res.multipliers = exact.multipliers;
    } else {
        // Infeasible: every row gets the same slack d >= 0, penalized by slack_weight * d^2.
        using Vec3 = detail::VecN<3>;
        std::vector<detail::LinearRow<3>> relaxed;
        relaxed.reserve(rows.size() + 1);
        for (const auto& r : rows) relaxed.push_back({Vec3(r.a.x(), r.a.y(), 1.0), r.c});
        relaxed.push_back({Vec3(0.0, 0.0, 1.0), 0.0});
        const Vec3 z0(u_ref.x(), u_ref.y(), 0.0);
        const Vec3 weights(1.0, 1.0, 2.0 * cfg.slack_weight);
        const auto sol = detail::solve_by_enumeration<3>(z0, weights, relaxed);
        res.relaxed = true;
        res.degenerate = res.degenerate || sol.degenerate;
        if (sol.found) {
            res.u_safe = sol.z.head<2>();
            res.slack = std::max(0.0, sol.z(2));
            for (std::size_t k = 0; k < sol.active.size(); ++k) {
                if (sol.active[k] < rows.size()) {
                    res.active_set.push_back(sol.active[k]);
                    res.multipliers.push_back(sol.multipliers[k]);
                }
            }
        } else {
            // Only reachable with non-finite rows; hold the reference.
            res.u_safe = u_ref;
        }
    }
    res.margins.reserve(rows.size());
    for (const auto& r : rows) res.margins.push_back(r.evaluate(res.u_safe));
    return res;
}

Vec2 compute_force(const Vec2& u_safe, const Vec2& u_ref, const FilterConfig& cfg) {
    return clamp_norm(cfg.force_gain * (u_safe - u_ref), cfg.max_force);
}

FilterResult filter(const UAVState& state, const Vec2& u_ref, const BarrierSet& barriers, const FilterConfig& cfg) {
    const auto rows = assemble_constraints(state, barriers, cfg.gain_p);
    FilterResult res = solve_qp(u_ref, rows, cfg);
    res.force = compute_force(res.u_safe, res.u_ref, cfg);
    return res;
}

}  // namespace cbft
