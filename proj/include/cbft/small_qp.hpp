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
#ifndef CBFT_SMALL_QP_HPP
#define CBFT_SMALL_QP_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace cbft::detail {

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;

/// Inequality a . z + c >= 0.
template <int N>
struct LinearRow {
    VecN<N> a;
    double c;
};

template <int N>
struct EnumerationResult {
    bool found = false;
    bool degenerate = false;  ///< a candidate active set had linearly dependent rows
    VecN<N> z = VecN<N>::Zero();
    std::vector<std::size_t> active;
    std::vector<double> multipliers;
};

struct EnumerationTolerances {
    double unconstrained = 1e-12;  ///< margin slack accepted for returning z0 unchanged
    double feasibility = 1e-9;
    double multiplier = 1e-9;
    double rank = 1e-12;
};

inline double row_tolerance(double base, double c, double a_norm, double z_norm) {
    return base * std::max(1.0, 1e-6 * (std::abs(c) + a_norm * z_norm));
}

/// Exact minimizer of 1/2 (z - z0)' W (z - z0) subject to the rows, W = diag(weights) > 0,
/// found by enumerating every active set of size <= N and keeping the first KKT point.
/// Rows are tried in order of decreasing violation at z0, so among parallel rows the
/// more violated one wins. Active sets are solved on unit-normalized rows; the reported
/// multipliers belong to the rows as given.
template <int N>
EnumerationResult<N> solve_by_enumeration(const VecN<N>& z0, const VecN<N>& weights,
                                          std::span<const LinearRow<N>> rows,
                                          const EnumerationTolerances& tol = {}) {
    using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, N, N>;
    using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, N, 1>;
    EnumerationResult<N> out;
    const std::size_t m = rows.size();
    const VecN<N> inv_w = weights.cwiseInverse();
    std::vector<double> scale(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double n = rows[i].a.norm();
        if (n > 0.0 && std::isfinite(n)) scale[i] = 1.0 / n;
    }

    auto margin = [&](std::size_t i, const VecN<N>& z) { return rows[i].a.dot(z) + rows[i].c; };
    auto feasible = [&](const VecN<N>& z, double base) {
        const double zn = z.norm();
        for (std::size_t i = 0; i < m; ++i) {
            if (scale[i] * margin(i, z) < -row_tolerance(base, scale[i] * rows[i].c, 1.0, zn)) return false;
        }
        return true;
    };
    auto unconstrained_ok = [&]() {
        for (std::size_t i = 0; i < m; ++i) {
            if (margin(i, z0) < -tol.unconstrained) return false;
        }
        return true;
    };

    if (unconstrained_ok()) {
        out.found = true;
        out.z = z0;
        return out;
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return margin(i, z0) < margin(j, z0); });

    std::vector<std::size_t> subset;
    subset.reserve(N);
    bool done = false;

    auto try_subset = [&]() {
        const auto k = static_cast<Eigen::Index>(subset.size());
        SmallMat a(k, N);
        SmallVec rhs(k);
        for (Eigen::Index r = 0; r < k; ++r) {
            a.row(r) = scale[subset[r]] * rows[subset[r]].a.transpose();
            rhs(r) = -scale[subset[r]] * margin(subset[r], z0);
        }
        const SmallMat a_winv = a * inv_w.asDiagonal();
        const SmallMat gram = a_winv * a.transpose();
        Eigen::FullPivLU<SmallMat> lu(gram);
        lu.setThreshold(tol.rank);
        if (lu.rank() < k) {
            out.degenerate = true;
            return;
        }
        const SmallVec lambda = lu.solve(rhs);
        for (Eigen::Index r = 0; r < k; ++r) {
            if (lambda(r) < -tol.multiplier) return;
        }
        const VecN<N> z = z0 + a_winv.transpose() * lambda;
        if (!feasible(z, tol.feasibility)) return;
        out.found = true;
        out.z = z;
        out.active.assign(subset.begin(), subset.end());
        out.multipliers.resize(static_cast<std::size_t>(k));
        for (Eigen::Index r = 0; r < k; ++r) out.multipliers[r] = lambda(r) * scale[subset[r]];
        done = true;
    };

    // Lexicographic enumeration of index combinations into `order`.
    for (int k = 1; k <= N && !done && static_cast<std::size_t>(k) <= m; ++k) {
        std::vector<std::size_t> pick(k);
        std::iota(pick.begin(), pick.end(), std::size_t{0});
        while (true) {
            subset.clear();
            for (auto p : pick) subset.push_back(order[p]);
            try_subset();
            if (done) break;
            int pos = k - 1;
            while (pos >= 0 && pick[pos] == m - k + pos) --pos;
            if (pos < 0) break;
            ++pick[pos];
            for (int q = pos + 1; q < k; ++q) pick[q] = pick[q - 1] + 1;
        }
    }
    return out;
}

}  // namespace cbft::detail

#endif  // CBFT_SMALL_QP_HPP
