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
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "majlattice/config.hpp"

namespace majlattice {

class ProbVec;

namespace detail {
ProbVec make_canonical(std::vector<double> entries);
}  // namespace detail

/// A Schmidt spectrum: probabilities sorted in non-increasing order, summing
/// to one, with trailing zeros stored explicitly so that vectors of different
/// ranks can share a dimension.
class ProbVec {
   public:
    ProbVec() = default;

    std::size_t dim() const noexcept {
        return entries_.size();
    }
    std::span<const double> entries() const noexcept {
        return entries_;
    }
    const std::vector<double> &vector() const noexcept {
        return entries_;
    }
    double operator[](std::size_t i) const {
        return entries_[i];
    }
    auto begin() const noexcept {
        return entries_.begin();
    }
    auto end() const noexcept {
        return entries_.end();
    }

    /// Copy extended with zeros to dimension `d` (no-op when already that wide).
    ProbVec padded(std::size_t d) const {
        ProbVec out = *this;
        if (d > out.entries_.size()) {
            out.entries_.resize(d, 0.0);
        }
        return out;
    }

    /// s_0 = 0, s_k = p_1 + ... + p_k, for k = 0..dim().
    std::vector<double> partial_sums() const {
        std::vector<double> s(entries_.size() + 1, 0.0);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            s[i + 1] = s[i] + entries_[i];
        }
        return s;
    }

    /// "(p_1, ..., p_d)" with each entry in shortest round-trip form.
    std::string str() const {
        std::string out = "(";
        char buf[32];
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto res = std::to_chars(buf, buf + sizeof(buf), entries_[i]);
            out += (i ? ", " : "") + std::string(buf, res.ptr);
        }
        return out + ")";
    }

   private:
    explicit ProbVec(std::vector<double> entries) : entries_(std::move(entries)) {
    }
    friend ProbVec detail::make_canonical(std::vector<double> entries);

    std::vector<double> entries_;
};

namespace detail {
/// Sorts descending and clamps negatives to zero, without validating the sum.
/// For vectors produced by library arithmetic that are canonical up to rounding.
inline ProbVec make_canonical(std::vector<double> entries) {
    for (double &x : entries) {
        if (x < 0.0) {
            x = 0.0;
        }
    }
    std::sort(entries.begin(), entries.end(), std::greater<>());
    return ProbVec(std::move(entries));
}

/// Normalizes non-negative weights by their total, then canonicalizes.
inline ProbVec normalized(std::vector<double> weights, double total) {
    for (double &w : weights) {
        w /= total;
    }
    return make_canonical(std::move(weights));
}
}  // namespace detail

/// Validates and canonicalizes a raw probability list. The result is padded with
/// zeros up to `dim` when `dim` exceeds the input length.
inline ProbVec canonicalize(std::span<const double> raw, std::size_t dim = 0) {
    if (raw.empty()) {
        throw Error(ErrorKind::EmptyInput, "probability vector must be non-empty");
    }
    const double eps = epsilon();
    double total = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw Error(ErrorKind::NotNormalized, "entry " + std::to_string(i) + " is not finite");
        }
        if (raw[i] < -eps) {
            std::ostringstream os;
            os << "entry " << i << " is " << raw[i];
            throw Error(ErrorKind::NegativeEntry, os.str());
        }
        total += raw[i];
    }
    if (std::abs(total - 1.0) > eps) {
        std::ostringstream os;
        os.precision(17);
        os << "entries sum to " << total;
        throw Error(ErrorKind::NotNormalized, os.str());
    }
    std::vector<double> entries(raw.begin(), raw.end());
    if (dim > entries.size()) {
        entries.resize(dim, 0.0);
    }
    return detail::make_canonical(std::move(entries));
}

inline ProbVec canonicalize(std::initializer_list<double> raw, std::size_t dim = 0) {
    return canonicalize(std::span<const double>(raw.begin(), raw.size()), dim);
}

inline ProbVec canonicalize(const std::vector<double> &raw, std::size_t dim = 0) {
    return canonicalize(std::span<const double>(raw), dim);
}

/// Number of entries strictly above the tolerance.
inline std::size_t effective_rank(const ProbVec &p) {
    const double eps = epsilon();
    return static_cast<std::size_t>(
        std::count_if(p.begin(), p.end(), [eps](double x) { return x > eps; }));
}

inline ProbVec uniform(std::size_t d) {
    return detail::make_canonical(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

/// (1, 0, ..., 0): a product state, the top of the order.
inline ProbVec product_state(std::size_t d) {
    std::vector<double> v(d, 0.0);
    v.at(0) = 1.0;
    return detail::make_canonical(std::move(v));
}

inline std::size_t common_dim(const ProbVec &p, const ProbVec &q) {
    return std::max(p.dim(), q.dim());
}

/// Smallest slack min_k (S^q_k - S^p_k) over k = 1..d-1, after zero-padding.
/// p is majorized by q iff the result is >= -epsilon. Returns 0 when d <= 1.
inline double majorization_margin(const ProbVec &p, const ProbVec &q) {
    const std::size_t d = common_dim(p, q);
    double sp = 0.0;
    double sq = 0.0;
    double margin = 0.0;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        sp += k < p.dim() ? p[k] : 0.0;
        sq += k < q.dim() ? q[k] : 0.0;
        margin = std::min(margin, sq - sp);
    }
    return margin;
}

/// p ≺ q: p is majorized by (more disordered than) q.
inline bool majorized_by(const ProbVec &p, const ProbVec &q) {
    return majorization_margin(p, q) >= -epsilon();
}

enum class MajOrder { Precedes, Succeeds, Equivalent, Incomparable };

inline std::string_view to_string(MajOrder order) {
    switch (order) {
        case MajOrder::Precedes:
            return "precedes";
        case MajOrder::Succeeds:
            return "succeeds";
        case MajOrder::Equivalent:
            return "equivalent";
        case MajOrder::Incomparable:
            return "incomparable";
    }
    return "unknown";
}

/// Four-way majorization comparison. Precedes means p ≺ q.
inline MajOrder compare(const ProbVec &p, const ProbVec &q) {
    const bool below = majorized_by(p, q);
    const bool above = majorized_by(q, p);
    if (below && above) {
        return MajOrder::Equivalent;
    }
    if (below) {
        return MajOrder::Precedes;
    }
    if (above) {
        return MajOrder::Succeeds;
    }
    return MajOrder::Incomparable;
}

inline bool comparable(const ProbVec &p, const ProbVec &q) {
    return compare(p, q) != MajOrder::Incomparable;
}

/// Max absolute entrywise difference after zero-padding.
inline double max_abs_diff(const ProbVec &p, const ProbVec &q) {
    const std::size_t d = common_dim(p, q);
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double a = i < p.dim() ? p[i] : 0.0;
        const double b = i < q.dim() ? q[i] : 0.0;
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

inline bool approx_equal(const ProbVec &p, const ProbVec &q, double tol) {
    return max_abs_diff(p, q) <= tol;
}

}  // namespace majlattice
