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
#include <cmath>
#include <functional>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "majlattice/schmidt.hpp"

namespace majlattice {

/// Uniform sample from the probability simplex (Dirichlet(1, ..., 1) via
/// normalized exponentials), sorted descending.
inline ProbVec random_probvec(std::size_t d, std::mt19937_64 &rng) {
    std::vector<double> w(d);
    double total = 0.0;
    for (double &x : w) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = -std::log1p(-u);
        total += x;
    }
    return detail::normalized(std::move(w), total);
}

/// Rejection-samples an incomparable pair. Returns nullopt after `max_tries`
/// attempts, which is always the case for d <= 2.
inline std::optional<std::pair<ProbVec, ProbVec>> random_incomparable_pair(std::size_t d, std::mt19937_64 &rng,
                                                                           std::size_t max_tries = 1000) {
    if (d <= 2) {
        return std::nullopt;
    }
    for (std::size_t t = 0; t < max_tries; ++t) {
        ProbVec p = random_probvec(d, rng);
        ProbVec q = random_probvec(d, rng);
        if (compare(p, q) == MajOrder::Incomparable) {
            return std::make_pair(std::move(p), std::move(q));
        }
    }
    return std::nullopt;
}

/// Random majorization-preserving perturbation: `steps` Robin Hood transfers,
/// each moving a random fraction of the gap from a larger entry to a smaller
/// one. The result is majorized by `p`.
inline ProbVec robin_hood(const ProbVec &p, std::size_t steps, std::mt19937_64 &rng) {
    std::vector<double> v(p.begin(), p.end());
    if (v.size() < 2) {
        return p;
    }
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    for (std::size_t s = 0; s < steps; ++s) {
        std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        if (v[a] < v[b]) {
            std::swap(a, b);
        }
        const double frac = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double moved = 0.5 * frac * (v[a] - v[b]);
        v[a] -= moved;
        v[b] += moved;
    }
    return detail::make_canonical(std::move(v));
}

/// Inverse transfers (smaller entry to larger one); the result majorizes `p`.
inline ProbVec reverse_robin_hood(const ProbVec &p, std::size_t steps, std::mt19937_64 &rng) {
    std::vector<double> v(p.begin(), p.end());
    if (v.size() < 2) {
        return p;
    }
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    for (std::size_t s = 0; s < steps; ++s) {
        std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        if (a == b) {
            continue;
        }
        if (v[a] < v[b]) {
            std::swap(a, b);
        }
        const double frac = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double moved = frac * v[b];
        v[a] += moved;
        v[b] -= moved;
    }
    return detail::make_canonical(std::move(v));
}

/// x ≺ y together with a non-negative, non-increasing weight vector `a` such
/// that sum a_i x_i = sum a_i y_i = 1.
struct HadamardInstance {
    ProbVec x;
    ProbVec y;
    std::vector<double> a;
};

/// Equal weighted sums force `a` to be constant wherever the partial sums of x
/// and y differ, so the generator cuts y into random blocks, scrambles x within
/// each block by Robin Hood transfers (block sums preserved), and draws one
/// weight per block.
inline HadamardInstance random_hadamard_instance(std::size_t d, std::mt19937_64 &rng) {
    const ProbVec y = random_probvec(d, rng);
    std::vector<std::size_t> starts{0};
    for (std::size_t k = 1; k < d; ++k) {
        if (rng() & 1U) {
            starts.push_back(k);
        }
    }
    starts.push_back(d);

    std::vector<double> x(y.begin(), y.end());
    std::vector<double> a(d);
    double level = 0.0;
    std::vector<double> block_levels(starts.size() - 1);
    for (std::size_t b = block_levels.size(); b-- > 0;) {
        level += -std::log1p(-static_cast<double>(rng() >> 11) * 0x1.0p-53);
        block_levels[b] = level;
    }
    for (std::size_t b = 0; b + 1 < starts.size(); ++b) {
        const std::size_t lo = starts[b];
        const std::size_t hi = starts[b + 1];
        if (hi - lo >= 2) {
            std::uniform_int_distribution<std::size_t> pick(lo, hi - 1);
            for (std::size_t s = 0; s < 4 * (hi - lo); ++s) {
                std::size_t i = pick(rng);
                std::size_t j = pick(rng);
                if (x[i] < x[j]) {
                    std::swap(i, j);
                }
                const double frac = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                const double moved = 0.5 * frac * (x[i] - x[j]);
                x[i] -= moved;
                x[j] += moved;
            }
            std::sort(x.begin() + static_cast<std::ptrdiff_t>(lo), x.begin() + static_cast<std::ptrdiff_t>(hi),
                      std::greater<>());
        }
        for (std::size_t i = lo; i < hi; ++i) {
            a[i] = block_levels[b];
        }
    }
    double ay = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        ay += a[i] * y[i];
    }
    for (double &w : a) {
        w /= ay;
    }
    return {detail::make_canonical(std::move(x)), y, std::move(a)};
}

}  // namespace majlattice
