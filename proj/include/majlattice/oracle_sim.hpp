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

// Dense bipartite state-vector simulator. It works with full amplitude
// matrices and singular value decompositions, independently of the
// spectrum-level arithmetic in protocols.hpp, and serves as a cross-check.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "majlattice/config.hpp"
#include "majlattice/protocols.hpp"
#include "majlattice/schmidt.hpp"

namespace majlattice::sim {

/// Amplitudes c_ij of sum_ij c_ij |i>_A |j>_B. Real amplitudes suffice since
/// Schmidt coefficients are phase invariant.
class BipartiteState {
   public:
    BipartiteState() = default;
    explicit BipartiteState(Eigen::MatrixXd amplitudes) : amp_(std::move(amplitudes)) {
    }

    const Eigen::MatrixXd &amplitudes() const noexcept {
        return amp_;
    }
    std::size_t dim_a() const noexcept {
        return static_cast<std::size_t>(amp_.rows());
    }
    std::size_t dim_b() const noexcept {
        return static_cast<std::size_t>(amp_.cols());
    }
    double norm() const {
        return amp_.norm();
    }

    /// (K ⊗ I)|s>, unnormalized.
    BipartiteState apply_alice(const Eigen::MatrixXd &op) const {
        return BipartiteState(op * amp_);
    }

    /// (U ⊗ V)|s>.
    BipartiteState apply_local(const Eigen::MatrixXd &u, const Eigen::MatrixXd &v) const {
        return BipartiteState(u * amp_ * v.transpose());
    }

    BipartiteState normalized() const {
        return BipartiteState(amp_ / amp_.norm());
    }

   private:
    Eigen::MatrixXd amp_;
};

/// Schmidt form: diagonal amplitude matrix with entries sqrt(p_i).
inline BipartiteState embed(const ProbVec &p) {
    const auto d = static_cast<Eigen::Index>(p.dim());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        a(i, i) = std::sqrt(p[static_cast<std::size_t>(i)]);
    }
    return BipartiteState(std::move(a));
}

/// Squared singular values of the amplitude matrix, i.e. the eigenvalues of
/// the reduced density matrix, sorted descending.
inline ProbVec schmidt_spectrum(const BipartiteState &s) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.amplitudes());
    const auto &sv = svd.singularValues();
    std::vector<double> p(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        p[static_cast<std::size_t>(i)] = sv(i) * sv(i);
    }
    p.resize(std::max(s.dim_a(), s.dim_b()), 0.0);
    return canonicalize(p);
}

inline Eigen::MatrixXd diagonal_operator(const std::vector<double> &diag) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = diag[i];
    }
    return v.asDiagonal();
}

enum class Outcome { Success, Failure };

struct Branch {
    double probability;
    BipartiteState post;
};

/// Exact branch for Alice's operator `op`: probability ||(op ⊗ I)s||^2 and
/// the renormalized post-measurement state.
inline Branch branch(const BipartiteState &s, const Eigen::MatrixXd &op) {
    BipartiteState unnormalized = s.apply_alice(op);
    const double prob = unnormalized.amplitudes().squaredNorm();
    if (prob <= epsilon()) {
        throw Error(ErrorKind::DegenerateBranch, "branch has zero probability");
    }
    return {prob, BipartiteState(unnormalized.amplitudes() / std::sqrt(prob))};
}

inline Branch branch(const BipartiteState &s, const KrausDiagonals &kraus, Outcome outcome) {
    return branch(s, diagonal_operator(outcome == Outcome::Success ? kraus.m : kraus.n));
}

struct MeasureResult {
    Outcome outcome;
    BipartiteState post;
    /// {P(success), P(failure)}, computed from the amplitudes.
    std::array<double, 2> probabilities;
};

inline const char *rng_algorithm() {
    return "mt19937_64";
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline MeasureResult measure(const BipartiteState &s, const KrausDiagonals &kraus, std::mt19937_64 &rng) {
    if (kraus.dim() != s.dim_a()) {
        throw std::invalid_argument("Kraus dimension does not match Alice's dimension");
    }
    const Eigen::MatrixXd m = diagonal_operator(kraus.m);
    const Eigen::MatrixXd n = diagonal_operator(kraus.n);
    const BipartiteState ms = s.apply_alice(m);
    const BipartiteState ns = s.apply_alice(n);
    const std::array<double, 2> probs{ms.amplitudes().squaredNorm(), ns.amplitudes().squaredNorm()};
    const double u = uniform01(rng) * (probs[0] + probs[1]);
    const Outcome outcome = u < probs[0] ? Outcome::Success : Outcome::Failure;
    const BipartiteState &chosen = outcome == Outcome::Success ? ms : ns;
    const double p = probs[outcome == Outcome::Success ? 0 : 1];
    if (p <= 0.0) {
        throw Error(ErrorKind::DegenerateBranch, "sampled branch has zero probability");
    }
    return {outcome, BipartiteState(chosen.amplitudes() / std::sqrt(p)), probs};
}

inline MeasureResult measure(const BipartiteState &s, const KrausDiagonals &kraus, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return measure(s, kraus, rng);
}

struct OutcomeStats {
    std::uint64_t shots = 0;
    std::uint64_t successes = 0;
    std::uint64_t seed = 0;
    std::string rng = rng_algorithm();
    /// Analytic success probability of the simulated plan.
    double expected_rate = 1.0;
    /// Mean Schmidt spectrum over failed shots; empty when every shot succeeded.
    std::vector<double> residual_mean;

    double success_rate() const {
        return shots ? static_cast<double>(successes) / static_cast<double>(shots) : 0.0;
    }
    /// 4 sigma binomial half-width around the analytic probability.
    double half_width() const {
        return shots ? 4.0 * std::sqrt(expected_rate * (1.0 - expected_rate) / static_cast<double>(shots)) : 0.0;
    }
};

/// Monte Carlo execution of a plan. Deterministic steps substitute the target
/// spectrum (the LOCC rounds realizing them are not simulated); probabilistic
/// steps are sampled with `measure` on the dense state. A failed shot stops
/// at the residual state.
inline OutcomeStats run_plan(const ConversionPlan &plan, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be at least 1");
    }
    std::mt19937_64 rng(seed);
    OutcomeStats stats;
    stats.shots = shots;
    stats.seed = seed;
    stats.expected_rate = plan.overall_success_prob;

    std::vector<double> residual_sum;
    std::uint64_t failures = 0;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        BipartiteState current = embed(plan.source.state);
        bool failed = false;
        for (const auto &step : plan.steps) {
            if (step.kind == StepKind::Deterministic) {
                current = embed(step.to.state);
                continue;
            }
            MeasureResult r = measure(current, *step.kraus, rng);
            if (r.outcome == Outcome::Failure) {
                const ProbVec spectrum = schmidt_spectrum(r.post);
                residual_sum.resize(std::max(residual_sum.size(), spectrum.dim()), 0.0);
                for (std::size_t i = 0; i < spectrum.dim(); ++i) {
                    residual_sum[i] += spectrum[i];
                }
                failed = true;
                break;
            }
            current = std::move(r.post);
        }
        if (failed) {
            ++failures;
        } else {
            ++stats.successes;
        }
    }
    if (failures > 0) {
        stats.residual_mean.resize(residual_sum.size());
        for (std::size_t i = 0; i < residual_sum.size(); ++i) {
            stats.residual_mean[i] = residual_sum[i] / static_cast<double>(failures);
        }
    }
    return stats;
}

}  // namespace majlattice::sim
