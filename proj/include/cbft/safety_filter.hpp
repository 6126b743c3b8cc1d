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
#ifndef CBFT_SAFETY_FILTER_HPP
#define CBFT_SAFETY_FILTER_HPP

#include "cbft/barriers.hpp"
#include "cbft/dynamics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cbft {

/// One second-order barrier constraint written as a . u + c >= 0, where for the double
/// integrator b'' = v'Hv + grad(b).u, so a = grad(b) and c = v'Hv + 2p grad(b).v + p^2 b.
struct ConstraintRow {
    Vec2 a{0.0, 0.0};
    double c = 0.0;
    std::size_t barrier_index = 0;

    double evaluate(const Vec2& u) const { return a.dot(u) + c; }
};

struct FilterConfig {
    double gain_p = 2.0;         ///< 1/s, must be > 0
    double force_gain = 0.165;   ///< N per m/s^2 of input correction
    double max_force = 3.3;      ///< N
    double slack_weight = 1e4;   ///< weight on the uniform slack when the QP is infeasible
};

void validate(const FilterConfig& cfg);

struct FilterResult {
    Vec2 u_ref{0.0, 0.0};
    Vec2 u_safe{0.0, 0.0};
    Vec2 force{0.0, 0.0};
    std::vector<double> margins;        ///< a . u_safe + c per row
    std::vector<std::size_t> active_set;  ///< indices into the row list
    std::vector<double> multipliers;    ///< one per active row
    bool relaxed = false;
    double slack = 0.0;
    bool degenerate = false;  ///< a dependent pair of rows was skipped during enumeration

    double objective() const { return 0.5 * (u_safe - u_ref).squaredNorm(); }
};

std::vector<ConstraintRow> assemble_constraints(const UAVState& state, const BarrierSet& barriers, double p);

/// Nearest input to u_ref satisfying every row. Falls back to a uniformly slack-relaxed
/// problem (relaxed = true) when the rows have no common solution. Force is left zero.
FilterResult solve_qp(const Vec2& u_ref, std::span<const ConstraintRow> rows, const FilterConfig& cfg);

/// F = K_f (u_safe - u_ref), norm-limited to F_max.
Vec2 compute_force(const Vec2& u_safe, const Vec2& u_ref, const FilterConfig& cfg);

/// Full pipeline for one tick: constraints, QP, feedback force.
FilterResult filter(const UAVState& state, const Vec2& u_ref, const BarrierSet& barriers, const FilterConfig& cfg);

}  // namespace cbft

#endif  // CBFT_SAFETY_FILTER_HPP
