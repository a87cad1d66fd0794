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
#include <cassert>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "majlattice/config.hpp"
#include "majlattice/schmidt.hpp"

namespace majlattice {

/// Entanglement monotones E_l = sum_{i >= l} p_i, stored for l = 1..d.
struct MonotoneProfile {
    std::vector<double> values;

    /// E_l with the 1-based index used throughout the ladder construction.
    /// Returns 0 for l = d + 1.
    double at(std::size_t l) const {
        return l - 1 < values.size() ? values[l - 1] : 0.0;
    }
    std::size_t dim() const noexcept {
        return values.size();
    }
};

inline MonotoneProfile monotones(const ProbVec &p, std::size_t d = 0) {
    const ProbVec v = p.padded(d);
    MonotoneProfile out{std::vector<double>(v.dim(), 0.0)};
    double tail = 0.0;
    for (std::size_t i = v.dim(); i-- > 0;) {
        tail += v[i];
        out.values[i] = tail;
    }
    return out;
}

/// One step (r_j, l_j) of the ratio ladder. `level` is the 1-based monotone
/// index l_j; the block it owns is [l_j, l_{j-1} - 1].
struct Rung {
    double ratio;
    std::size_t level;
};

/// The sequence (r_1, l_1), ..., (r_k, l_k) with l_0 = dim + 1 > l_1 > ... > l_k = 1
/// and r_1 < ... < r_k. r_1 is the optimal conversion probability.
struct RatioLadder {
    std::size_t dim = 0;
    std::vector<Rung> rungs;

    std::size_t k() const noexcept {
        return rungs.size();
    }
    double r1() const {
        return rungs.front().ratio;
    }
    std::size_t l0() const noexcept {
        return dim + 1;
    }
    /// Upper end (inclusive, 1-based) of block j, i.e. l_{j-1} - 1. j is 1-based.
    std::size_t block_end(std::size_t j) const {
        return j == 1 ? dim : rungs[j - 2].level - 1;
    }
};

namespace detail {
/// Checks the rank condition and returns the common dimension.
inline std::size_t check_convertible(const ProbVec &source, const ProbVec &target,
                                     const std::string &target_name = "target") {
    const std::size_t rs = effective_rank(source);
    const std::size_t rt = effective_rank(target);
    if (rt > rs) {
        throw Error(ErrorKind::RankDeficit,
                    target_name + " has effective rank " + std::to_string(rt) +
                        " but the source only " + std::to_string(rs) +
                        "; conversion probability is 0");
    }
    return common_dim(source, target);
}
}  // namespace detail

/// Optimal probability of converting `source` into `target` by LOCC: the minimum
/// of E_l(source) / E_l(target) over l with a nonzero target monotone.
inline double p_max(const ProbVec &source, const ProbVec &target) {
    const std::size_t d = detail::check_convertible(source, target);
    const auto es = monotones(source, d);
    const auto et = monotones(target, d);
    const std::size_t admissible = effective_rank(target);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 1; l <= admissible; ++l) {
        best = std::min(best, es.at(l) / et.at(l));
    }
    return std::min(best, 1.0);
}

/// Builds the ladder by repeated minimization of segment ratios
///   (E_l(src) - E_{l_{j-1}}(src)) / (E_l(tgt) - E_{l_{j-1}}(tgt)),  l < l_{j-1},
/// breaking ties toward the smallest l. Segment sums are accumulated directly
/// from the entries instead of differencing monotones.
inline RatioLadder ratio_ladder(const ProbVec &source, const ProbVec &target) {
    const std::size_t d = detail::check_convertible(source, target);
    const ProbVec src = source.padded(d);
    const ProbVec tgt = target.padded(d);
    const std::size_t admissible = effective_rank(target);

    RatioLadder ladder;
    ladder.dim = d;
    std::size_t prev = d + 1;
    while (prev > 1) {
        double num = 0.0;
        double den = 0.0;
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_l = 0;
        // Walk l downward from prev - 1 so the running sums are segment sums.
        for (std::size_t l = prev - 1; l >= 1; --l) {
            num += src[l - 1];
            den += tgt[l - 1];
            if (l <= admissible) {
                assert(den > 0.0);
                const double ratio = num / den;
                if (ratio <= best) {
                    best = ratio;
                    best_l = l;
                }
            }
        }
        assert(best_l >= 1);
        ladder.rungs.push_back({best, best_l});
        prev = best_l;
    }
    return ladder;
}

/// Block-constant vector with entry r_j on block [l_j, l_{j-1} - 1]; non-increasing.
inline std::vector<double> r_vector(const RatioLadder &ladder) {
    std::vector<double> r(ladder.dim, 0.0);
    for (std::size_t j = 1; j <= ladder.k(); ++j) {
        const auto &rung = ladder.rungs[j - 1];
        for (std::size_t i = rung.level; i <= ladder.block_end(j); ++i) {
            r[i - 1] = rung.ratio;
        }
    }
    return r;
}

/// Elementwise product a ⊙ p, canonicalized (not renormalized).
inline ProbVec hadamard(std::span<const double> a, const ProbVec &p) {
    const ProbVec v = p.padded(a.size());
    std::vector<double> out(v.dim(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * v[i];
    }
    return detail::make_canonical(std::move(out));
}

/// Deterministically reachable state from which a two-outcome measurement
/// yields `target` with probability r_1: r_vector ⊙ target.
inline ProbVec intermediate_state(const ProbVec &source, const ProbVec &target) {
    const RatioLadder ladder = ratio_ladder(source, target);
    return hadamard(r_vector(ladder), target);
}

}  // namespace majlattice
