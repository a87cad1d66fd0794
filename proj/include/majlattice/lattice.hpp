// Copyright 2026 The majlattice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "majlattice/config.hpp"
#include "majlattice/schmidt.hpp"

namespace majlattice {

/// Partial sums s_0..s_d of `p` zero-padded to dimension `d`.
inline std::vector<double> cumulative_sums(const ProbVec &p, std::size_t d) {
    return p.padded(d).partial_sums();
}

/// Least concave majorant of the points (k, values[k]), k = 0..n-1, evaluated
/// at the same integer abscissas. Single monotone-stack sweep; points lying on
/// or below a hull chord are dropped, so collinear runs collapse to their ends.
inline std::vector<double> least_concave_majorant(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> hull;
    hull.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2];
            const std::size_t b = hull.back();
            // b is dropped when it does not lie strictly above chord a -> k.
            const double lhs = (values[b] - values[a]) * static_cast<double>(k - a);
            const double rhs = (values[k] - values[a]) * static_cast<double>(b - a);
            if (lhs <= rhs) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(k);
    }

    std::vector<double> envelope(n);
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const std::size_t a = hull[h];
        const std::size_t b = hull[h + 1];
        // Weighted form: for values of one sign, small ones keep their
        // relative precision.
        const double span = static_cast<double>(b - a);
        for (std::size_t k = a; k < b; ++k) {
            envelope[k] = (values[a] * static_cast<double>(b - k) + values[b] * static_cast<double>(k - a)) / span;
        }
    }
    if (!hull.empty()) {
        envelope[hull.back()] = values[hull.back()];
    }
    return envelope;
}

/// Tail sums t_k = p_{k+1} + ... + p_d of `p` zero-padded to dimension `d`,
/// for k = 0..d, accumulated from the smallest entry up.
inline std::vector<double> tail_sums(const ProbVec &p, std::size_t d) {
    const ProbVec v = p.padded(d);
    std::vector<double> t(v.dim() + 1, 0.0);
    for (std::size_t k = v.dim(); k-- > 0;) {
        t[k] = t[k + 1] + v[k];
    }
    return t;
}

namespace detail {
inline ProbVec from_tails(const std::vector<double> &t) {
    std::vector<double> entries(t.size() - 1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        entries[i] = t[i] - t[i + 1];
    }
    return make_canonical(std::move(entries));
}
}  // namespace detail

// Both operations work on tail sums (t_k = 1 - s_k) rather than partial sums:
// small tails then keep full relative precision, which the monotone ratios
// downstream depend on.

/// Greatest lower bound p ∧ q (the optimal common resource): the most ordered
/// vector majorized by both inputs. Its cumulative sums are the pointwise
/// minimum of the inputs' cumulative sums.
inline ProbVec meet(const ProbVec &p, const ProbVec &q) {
    const std::size_t d = common_dim(p, q);
    const auto tp = tail_sums(p, d);
    const auto tq = tail_sums(q, d);
    std::vector<double> t(d + 1);
    for (std::size_t k = 0; k <= d; ++k) {
        t[k] = std::max(tp[k], tq[k]);
    }
    return detail::from_tails(t);
}

/// Least upper bound p ∨ q (the optimal common product). The pointwise maximum
/// of cumulative sums need not be concave, so its least concave majorant is
/// taken before differencing.
inline ProbVec join(const ProbVec &p, const ProbVec &q) {
    const std::size_t d = common_dim(p, q);
    const auto tp = tail_sums(p, d);
    const auto tq = tail_sums(q, d);
    std::vector<double> neg(d + 1);
    for (std::size_t k = 0; k <= d; ++k) {
        neg[k] = -std::min(tp[k], tq[k]);
    }
    std::vector<double> t = least_concave_majorant(neg);
    for (double &x : t) {
        x = -x;
    }
    return detail::from_tails(t);
}

namespace detail {
template <typename Op>
ProbVec fold(std::span<const ProbVec> vs, Op op) {
    if (vs.empty()) {
        throw Error(ErrorKind::EmptyCollection, "lattice fold over an empty collection");
    }
    std::size_t d = 0;
    for (const auto &v : vs) {
        d = std::max(d, v.dim());
    }
    ProbVec acc = vs.front().padded(d);
    for (std::size_t i = 1; i < vs.size(); ++i) {
        acc = op(acc, vs[i]);
    }
    return acc;
}
}  // namespace detail

inline ProbVec meet_many(std::span<const ProbVec> vs) {
    return detail::fold(vs, [](const ProbVec &a, const ProbVec &b) { return meet(a, b); });
}

inline ProbVec join_many(std::span<const ProbVec> vs) {
    return detail::fold(vs, [](const ProbVec &a, const ProbVec &b) { return join(a, b); });
}

}  // namespace majlattice
