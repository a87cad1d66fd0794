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

#include "majlattice/ladder.hpp"

#include <random>

#include "gtest/gtest.h"
#include "majlattice/lattice.hpp"
#include "majlattice/random.hpp"
#include "oracle/naive.hpp"

using namespace majlattice;

namespace {
const ProbVec kPsi = canonicalize({0.5, 0.4, 0.1});
const ProbVec kPhi = canonicalize({0.6, 0.2, 0.2});
const ProbVec kMeet = canonicalize({0.5, 0.3, 0.2});

void expect_near(const std::vector<double> &got, const std::vector<double> &want, double tol = 1e-12) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(got[i], want[i], tol) << "entry " << i;
    }
}

void expect_valid_ladder(const RatioLadder &ladder) {
    ASSERT_GE(ladder.k(), 1u);
    EXPECT_LE(ladder.r1(), 1.0 + 1e-12);
    EXPECT_GT(ladder.r1(), 0.0);
    EXPECT_EQ(ladder.rungs.back().level, 1u);
    EXPECT_LT(ladder.rungs.front().level, ladder.l0());
    for (std::size_t j = 1; j < ladder.k(); ++j) {
        EXPECT_LT(ladder.rungs[j - 1].ratio, ladder.rungs[j].ratio);
        EXPECT_GT(ladder.rungs[j - 1].level, ladder.rungs[j].level);
    }
}
}  // namespace

TEST(Monotones, examples) {
    expect_near(monotones(kPsi).values, {1.0, 0.5, 0.1});
    expect_near(monotones(canonicalize({1.0, 0.0, 0.0})).values, {1.0, 0.0, 0.0});
    expect_near(monotones(kPhi).values, {1.0, 0.4, 0.2});
    EXPECT_EQ(monotones(kPsi).at(4), 0.0);
}

TEST(PMax, examples) {
    EXPECT_NEAR(p_max(kPsi, kPhi), 0.5, 1e-12);
    EXPECT_EQ(p_max(kPsi, kPsi), 1.0);
    EXPECT_EQ(p_max(canonicalize({0.5, 0.5}), canonicalize({1.0, 0.0})), 1.0);
}

TEST(PMax, rank_deficit) {
    try {
        p_max(canonicalize({1.0, 0.0}), canonicalize({0.5, 0.5}));
        FAIL() << "expected RankDeficit";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::RankDeficit);
    }
    EXPECT_THROW(ratio_ladder(canonicalize({0.9, 0.1, 0.0}), kPhi), Error);
    EXPECT_THROW(intermediate_state(canonicalize({0.9, 0.1, 0.0}), kPhi), Error);
}

TEST(RatioLadder, worked_pair) {
    const RatioLadder ladder = ratio_ladder(kPsi, kPhi);
    ASSERT_EQ(ladder.k(), 2u);
    EXPECT_NEAR(ladder.rungs[0].ratio, 0.5, 1e-12);
    EXPECT_EQ(ladder.rungs[0].level, 3u);
    EXPECT_NEAR(ladder.rungs[1].ratio, 1.125, 1e-12);
    EXPECT_EQ(ladder.rungs[1].level, 1u);
    EXPECT_EQ(ladder.l0(), 4u);
    expect_valid_ladder(ladder);
}

TEST(RatioLadder, identical_states) {
    const RatioLadder ladder = ratio_ladder(kPsi, kPsi);
    ASSERT_EQ(ladder.k(), 1u);
    EXPECT_EQ(ladder.rungs[0].ratio, 1.0);
    EXPECT_EQ(ladder.rungs[0].level, 1u);
}

TEST(RatioLadder, to_meet_shares_rungs) {
    const RatioLadder ladder = ratio_ladder(kPsi, kMeet);
    ASSERT_EQ(ladder.k(), 2u);
    EXPECT_NEAR(ladder.rungs[0].ratio, 0.5, 1e-12);
    EXPECT_EQ(ladder.rungs[0].level, 3u);
    EXPECT_NEAR(ladder.rungs[1].ratio, 1.125, 1e-12);
    EXPECT_EQ(ladder.rungs[1].level, 1u);
}

TEST(RVector, examples) {
    expect_near(r_vector(ratio_ladder(kPsi, kPhi)), {1.125, 1.125, 0.5});
    RatioLadder flat{3, {{1.0, 1}}};
    expect_near(r_vector(flat), {1.0, 1.0, 1.0});
}

TEST(IntermediateState, examples) {
    expect_near(intermediate_state(kPsi, kPhi).vector(), {0.675, 0.225, 0.1});
    expect_near(intermediate_state(kPsi, kMeet).vector(), {0.5625, 0.3375, 0.1});
    const ProbVec bottom = uniform(3);
    expect_near(intermediate_state(bottom, kPhi).vector(), kPhi.vector());
}

TEST(IntermediateState, lower_rank_target) {
    // Target has a trailing zero: only l <= 2 enters the minimization.
    const ProbVec src = canonicalize({0.9, 0.05, 0.05});
    const ProbVec tgt = canonicalize({0.5, 0.5, 0.0});
    EXPECT_NEAR(p_max(src, tgt), 0.2, 1e-12);
    const RatioLadder ladder = ratio_ladder(src, tgt);
    ASSERT_EQ(ladder.k(), 2u);
    EXPECT_EQ(ladder.rungs[0].level, 2u);
    EXPECT_NEAR(ladder.rungs[1].ratio, 1.8, 1e-12);
    expect_near(intermediate_state(src, tgt).vector(), {0.9, 0.1, 0.0});
}

TEST(LadderProperty, nielsen_equivalence) {
    std::mt19937_64 rng(31);
    int deterministic = 0;
    for (int t = 0; t < 20000; ++t) {
        const std::size_t d = 2 + t % 7;
        const ProbVec p = random_probvec(d, rng);
        const ProbVec q = random_probvec(d, rng);
        const bool one = p_max(p, q) >= 1.0 - 1e-12;
        const MajOrder o = compare(p, q);
        EXPECT_EQ(one, o == MajOrder::Precedes || o == MajOrder::Equivalent);
        deterministic += one;
    }
    EXPECT_GT(deterministic, 1000);
}

TEST(LadderProperty, p_max_matches_brute_force) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 20000; ++t) {
        const std::size_t d = 2 + t % 3;
        const ProbVec p = random_probvec(d, rng);
        const ProbVec q = random_probvec(d, rng);
        EXPECT_NEAR(p_max(p, q), naive::p_max(p.vector(), q.vector()), 1e-12);
    }
}

TEST(LadderProperty, ladder_consistency) {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 5000; ++t) {
        const std::size_t d = 2 + t % 7;
        const ProbVec p = random_probvec(d, rng);
        const ProbVec q = random_probvec(d, rng);
        const RatioLadder ladder = ratio_ladder(p, q);
        expect_valid_ladder(ladder);
        EXPECT_NEAR(std::min(ladder.r1(), 1.0), p_max(p, q), 1e-12);

        const auto r = r_vector(ladder);
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            EXPECT_GE(r[i], r[i + 1]);
        }
        const ProbVec chi = intermediate_state(p, q);
        double total = 0.0;
        for (double x : chi) {
            total += x;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_TRUE(majorized_by(p, chi));
        EXPECT_TRUE(majorized_by(q, chi));
        // χ reproduces the source monotones at every ladder level, and at l_1
        // that value is r_1 E_{l_1}(target).
        const auto ec = monotones(chi);
        const auto ep = monotones(p);
        const auto eq = monotones(q);
        for (const auto &rung : ladder.rungs) {
            EXPECT_NEAR(ec.at(rung.level), ep.at(rung.level), 1e-12);
        }
        const auto l1 = ladder.rungs.front().level;
        EXPECT_NEAR(ec.at(l1), ladder.r1() * eq.at(l1), 1e-12);
    }
}

TEST(LadderProperty, meet_monotones_are_maxima) {
    std::mt19937_64 rng(34);
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t d = 2 + t % 7;
        const ProbVec p = random_probvec(d, rng);
        const ProbVec q = random_probvec(d, rng);
        const auto em = monotones(meet(p, q));
        const auto ep = naive::monotones(p.vector(), d);
        const auto eq = naive::monotones(q.vector(), d);
        for (std::size_t l = 1; l <= d; ++l) {
            worst = std::max(worst, std::abs(em.at(l) - std::max(ep[l - 1], eq[l - 1])));
        }
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(LadderProperty, meet_keeps_optimal_probability) {
    std::mt19937_64 rng(35);
    int checked = 0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t d = 3 + t % 6;
        auto pair = random_incomparable_pair(d, rng);
        ASSERT_TRUE(pair);
        const auto &[p, q] = *pair;
        EXPECT_NEAR(ratio_ladder(p, meet(p, q)).r1(), ratio_ladder(p, q).r1(), 1e-12);
        ++checked;
    }
    EXPECT_EQ(checked, 10000);
}

TEST(LadderProperty, hadamard_preserves_majorization) {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 10000; ++t) {
        const std::size_t d = 2 + t % 7;
        const HadamardInstance h = random_hadamard_instance(d, rng);
        ASSERT_TRUE(naive::majorized(h.x.vector(), h.y.vector(), 1e-12));
        double ax = 0.0;
        double ay = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            ASSERT_GE(h.a[i], 0.0);
            if (i + 1 < d) {
                ASSERT_GE(h.a[i], h.a[i + 1]);
            }
            ax += h.a[i] * h.x[i];
            ay += h.a[i] * h.y[i];
        }
        ASSERT_NEAR(ax, 1.0, 1e-12);
        ASSERT_NEAR(ay, 1.0, 1e-12);
        // Index-order partial sums of a ⊙ (y - x) stay non-negative.
        double partial = 0.0;
        for (std::size_t k = 0; k + 1 < d; ++k) {
            partial += h.a[k] * (h.y[k] - h.x[k]);
            EXPECT_GE(partial, -1e-9);
        }
        EXPECT_TRUE(majorized_by(hadamard(h.a, h.x), hadamard(h.a, h.y)));
    }
}
