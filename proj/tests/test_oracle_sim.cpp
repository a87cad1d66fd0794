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

#include "majlattice/oracle_sim.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "majlattice/random.hpp"

using namespace majlattice;
using namespace majlattice::sim;

namespace {
const ProbVec kPsi = canonicalize({0.5, 0.4, 0.1});
const ProbVec kPhi = canonicalize({0.6, 0.2, 0.2});
const ProbVec kChi = canonicalize({0.675, 0.225, 0.1});

void expect_near(std::span<const double> got, const std::vector<double> &want, double tol) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(got[i], want[i], tol) << "entry " << i;
    }
}
}  // namespace

TEST(Embed, schmidt_form) {
    EXPECT_EQ(embed(canonicalize({1.0})).amplitudes()(0, 0), 1.0);
    const BipartiteState bell = embed(canonicalize({0.5, 0.5}));
    EXPECT_NEAR(bell.amplitudes()(0, 0), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(bell.amplitudes()(1, 1), std::sqrt(0.5), 1e-15);
    EXPECT_EQ(bell.amplitudes()(0, 1), 0.0);
    const BipartiteState s = embed(kPhi);
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(s.amplitudes()(i, i) * s.amplitudes()(i, i), kPhi[static_cast<std::size_t>(i)], 1e-15);
    }
}

TEST(SchmidtSpectrum, round_trip_and_product_state) {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 500; ++t) {
        const ProbVec p = random_probvec(2 + t % 7, rng);
        EXPECT_LE(max_abs_diff(schmidt_spectrum(embed(p)), p), 1e-9);
    }
    Eigen::MatrixXd product(3, 3);
    product << 0.6, 0.0, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
    const ProbVec s = schmidt_spectrum(BipartiteState(product));
    expect_near(s.entries(), {1.0, 0.0, 0.0}, 1e-12);
}

TEST(SchmidtSpectrum, success_branch_gives_target) {
    const KrausDiagonals k = kraus_diagonals(ratio_ladder(kPsi, kPhi));
    const Branch b = branch(embed(kChi), k, Outcome::Success);
    EXPECT_NEAR(b.probability, 0.5, 1e-12);
    expect_near(schmidt_spectrum(b.post).entries(), {0.6, 0.2, 0.2}, 1e-12);
}

TEST(Measure, worked_branch_probabilities) {
    const KrausDiagonals k = kraus_diagonals(ratio_ladder(kPsi, kPhi));
    const MeasureResult r = measure(embed(kChi), k, std::uint64_t{7});
    EXPECT_NEAR(r.probabilities[0], 0.5, 1e-12);
    EXPECT_NEAR(r.probabilities[1], 0.5, 1e-12);
    const Branch fail = branch(embed(kChi), k, Outcome::Failure);
    expect_near(schmidt_spectrum(fail.post).entries(), {0.75, 0.25, 0.0}, 1e-12);
}

TEST(Measure, identity_always_succeeds) {
    const MeasureResult r = measure(embed(kPsi), identity_kraus(3), std::uint64_t{1});
    EXPECT_EQ(r.outcome, Outcome::Success);
    EXPECT_NEAR(r.probabilities[0], 1.0, 1e-15);
    EXPECT_THROW(branch(embed(kPsi), identity_kraus(3), Outcome::Failure), Error);
}

TEST(Measure, seed_determinism) {
    const KrausDiagonals k = kraus_diagonals(ratio_ladder(kPsi, kPhi));
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        EXPECT_EQ(measure(embed(kChi), k, seed).outcome, measure(embed(kChi), k, seed).outcome);
    }
}

TEST(OracleProperty, matches_spectrum_arithmetic) {
    std::mt19937_64 rng(52);
    int checked = 0;
    for (int t = 0; t < 2000; ++t) {
        const std::size_t d = 2 + t % 7;
        const ProbVec p = random_probvec(d, rng);
        const ProbVec q = random_probvec(d, rng);
        if (majorized_by(p, q)) {
            continue;
        }
        ++checked;
        const RatioLadder ladder = ratio_ladder(p, q);
        const ProbVec chi = intermediate_state(p, q);
        const KrausDiagonals k = kraus_diagonals(ladder);
        const TwoOutcome analytic = apply_two_outcome(chi, k);
        const BipartiteState s = embed(chi);
        const Branch ok = branch(s, k, Outcome::Success);
        const Branch fail = branch(s, k, Outcome::Failure);
        EXPECT_NEAR(ok.probability, analytic.success_prob, 1e-9);
        EXPECT_NEAR(ok.probability + fail.probability, 1.0, 1e-9);
        EXPECT_LE(max_abs_diff(schmidt_spectrum(ok.post), analytic.success()), 1e-9);
        EXPECT_LE(max_abs_diff(schmidt_spectrum(fail.post), analytic.failure()), 1e-9);
        EXPECT_LE(max_abs_diff(schmidt_spectrum(ok.post), q), 1e-9);
    }
    EXPECT_GT(checked, 500);
}

TEST(OracleProperty, local_unitaries_do_not_change_spectra) {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 200; ++t) {
        const std::size_t d = 2 + t % 6;
        const ProbVec p = random_probvec(d, rng);
        const Eigen::MatrixXd u = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))
                                      .householderQr()
                                      .householderQ();
        const Eigen::MatrixXd v = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))
                                      .householderQr()
                                      .householderQ();
        EXPECT_LE(max_abs_diff(schmidt_spectrum(embed(p).apply_local(u, v)), p), 1e-9);
    }
}

TEST(RunPlan, worked_thrifty_within_binomial_bound) {
    const ConversionPlan plan = plan_thrifty(kPsi, kPhi);
    const OutcomeStats stats = run_plan(plan, 100000, 2024);
    EXPECT_EQ(stats.shots, 100000u);
    const double bound = 4.0 * std::sqrt(0.25 / 1e5);
    EXPECT_NEAR(stats.half_width(), bound, 1e-15);
    EXPECT_NEAR(stats.success_rate(), 0.5, bound);
    expect_near(stats.residual_mean, {0.625, 0.375, 0.0}, 1e-9);
    EXPECT_EQ(stats.rng, "mt19937_64");
}

TEST(RunPlan, deterministic_plan_always_succeeds) {
    const OutcomeStats stats = run_plan(plan_vidal(uniform(3), kPhi), 1000, 3);
    EXPECT_EQ(stats.successes, 1000u);
    EXPECT_TRUE(stats.residual_mean.empty());
}

TEST(RunPlan, single_shot_and_seed_determinism) {
    const ConversionPlan plan = plan_greedy(kPsi, kPhi);
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        const OutcomeStats a = run_plan(plan, 1, seed);
        EXPECT_LE(a.successes, 1u);
        const OutcomeStats b = run_plan(plan, 1, seed);
        EXPECT_EQ(a.successes, b.successes);
    }
    const OutcomeStats x = run_plan(plan, 5000, 99);
    const OutcomeStats y = run_plan(plan, 5000, 99);
    EXPECT_EQ(x.successes, y.successes);
    EXPECT_EQ(x.residual_mean, y.residual_mean);
    EXPECT_THROW(run_plan(plan, 0, 1), std::invalid_argument);
}
