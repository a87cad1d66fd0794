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
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "majlattice/config.hpp"
#include "majlattice/ladder.hpp"
#include "majlattice/lattice.hpp"
#include "majlattice/schmidt.hpp"

namespace majlattice {

/// Diagonals of the two Kraus operators M (success) and N (failure) of the
/// local two-outcome measurement, in the Schmidt basis of the measured state.
struct KrausDiagonals {
    std::vector<double> m;
    std::vector<double> n;

    std::size_t dim() const noexcept {
        return m.size();
    }
    /// max_i |m_i^2 + n_i^2 - 1|
    double completeness_defect() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            worst = std::max(worst, std::abs(m[i] * m[i] + n[i] * n[i] - 1.0));
        }
        return worst;
    }
};

/// m_i = sqrt(r_1 / r_j) and n_i = sqrt(1 - r_1 / r_j) on block j. The block
/// of rung 1 gets m = 1, n = 0 exactly.
inline KrausDiagonals kraus_diagonals(const RatioLadder &ladder) {
    const auto r = r_vector(ladder);
    const double r1 = ladder.r1();
    KrausDiagonals k{std::vector<double>(r.size()), std::vector<double>(r.size())};
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] == r1) {
            k.m[i] = 1.0;
            k.n[i] = 0.0;
        } else {
            k.m[i] = std::sqrt(r1 / r[i]);
            k.n[i] = std::sqrt((r[i] - r1) / r[i]);
        }
    }
    return k;
}

inline KrausDiagonals identity_kraus(std::size_t d) {
    return {std::vector<double>(d, 1.0), std::vector<double>(d, 0.0)};
}

/// Result of measuring {M, N} on a Schmidt spectrum. A branch whose probability
/// is within epsilon of zero has no post-measurement state.
struct TwoOutcome {
    double success_prob = 0.0;
    std::optional<ProbVec> success_state;
    std::optional<ProbVec> failure_state;

    const ProbVec &success() const {
        if (!success_state) {
            throw Error(ErrorKind::DegenerateBranch, "success branch has zero probability");
        }
        return *success_state;
    }
    const ProbVec &failure() const {
        if (!failure_state) {
            throw Error(ErrorKind::DegenerateBranch, "failure branch has zero probability");
        }
        return *failure_state;
    }
};

/// Born-rule update of a spectrum under diagonal Kraus operators. Post-measurement
/// spectra are re-sorted; which basis index went where is not retained.
inline TwoOutcome apply_two_outcome(const ProbVec &state, const KrausDiagonals &kraus) {
    const std::size_t d = std::max(state.dim(), kraus.dim());
    if (kraus.dim() != d) {
        throw std::invalid_argument("Kraus dimension " + std::to_string(kraus.dim()) +
                                    " does not match state dimension " + std::to_string(state.dim()));
    }
    const ProbVec s = state.padded(d);
    std::vector<double> ws(d);
    std::vector<double> wf(d);
    double ps = 0.0;
    double pf = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        ws[i] = kraus.m[i] * kraus.m[i] * s[i];
        wf[i] = kraus.n[i] * kraus.n[i] * s[i];
        ps += ws[i];
        pf += wf[i];
    }
    const double eps = epsilon();
    TwoOutcome out;
    out.success_prob = ps;
    if (ps > eps) {
        out.success_state = detail::normalized(std::move(ws), ps);
    }
    if (pf > eps) {
        out.failure_state = detail::normalized(std::move(wf), pf);
    }
    return out;
}

struct NamedState {
    std::string name;
    ProbVec state;
};

enum class StepKind { Deterministic, Probabilistic };

inline std::string_view to_string(StepKind kind) {
    return kind == StepKind::Deterministic ? "deterministic" : "probabilistic";
}

/// One move of a plan. Deterministic moves need from ≺ to. Probabilistic moves
/// measure `from` with `kraus`, landing on `to` with `success_prob` and on
/// `failure` otherwise.
struct PlanStep {
    StepKind kind = StepKind::Deterministic;
    NamedState from;
    NamedState to;
    std::optional<KrausDiagonals> kraus;
    double success_prob = 1.0;
    std::optional<NamedState> failure;
};

struct ConversionPlan {
    std::string protocol;
    NamedState source;
    NamedState target;
    RatioLadder ladder;
    std::vector<PlanStep> steps;
    double overall_success_prob = 1.0;
    std::optional<NamedState> residual;

    /// First probabilistic step, if any.
    const PlanStep *probabilistic_step() const {
        for (const auto &s : steps) {
            if (s.kind == StepKind::Probabilistic) {
                return &s;
            }
        }
        return nullptr;
    }
};

namespace detail {
inline PlanStep deterministic_step(NamedState from, NamedState to) {
    PlanStep s;
    s.kind = StepKind::Deterministic;
    s.from = std::move(from);
    s.to = std::move(to);
    return s;
}

/// Vidal's construction from `source` to `target`: deterministic move to the
/// intermediate state, then the two-outcome measurement. Appends the steps to
/// `plan` and fills ladder, success probability and residual.
inline void append_vidal(ConversionPlan &plan, const NamedState &source, const NamedState &target,
                         const std::string &intermediate_name, const std::string &residual_name) {
    plan.ladder = ratio_ladder(source.state, target.state);
    const MajOrder order = compare(source.state, target.state);
    if (order == MajOrder::Precedes || order == MajOrder::Equivalent) {
        plan.steps.push_back(deterministic_step(source, target));
        plan.overall_success_prob = 1.0;
        return;
    }
    const double r1 = plan.ladder.r1();
    NamedState intermediate{intermediate_name, hadamard(r_vector(plan.ladder), target.state)};
    KrausDiagonals kraus = kraus_diagonals(plan.ladder);
    const TwoOutcome outcome = apply_two_outcome(intermediate.state, kraus);

    plan.steps.push_back(deterministic_step(source, intermediate));
    PlanStep measure;
    measure.kind = StepKind::Probabilistic;
    measure.from = std::move(intermediate);
    measure.to = target;
    measure.kraus = std::move(kraus);
    measure.success_prob = r1;
    if (outcome.failure_state) {
        measure.failure = NamedState{residual_name, *outcome.failure_state};
        plan.residual = measure.failure;
    }
    plan.steps.push_back(std::move(measure));
    plan.overall_success_prob = r1;
}

inline ConversionPlan empty_plan(std::string protocol, const ProbVec &source, const ProbVec &target) {
    ConversionPlan plan;
    plan.protocol = std::move(protocol);
    plan.source = {"psi", source};
    plan.target = {"phi", target};
    return plan;
}
}  // namespace detail

/// Vidal's optimal protocol: ψ → χ deterministically, then measure χ → φ
/// (residual ξ on failure). A single deterministic step when ψ ≺ φ.
inline ConversionPlan plan_vidal(const ProbVec &source, const ProbVec &target) {
    detail::check_convertible(source, target);
    ConversionPlan plan = detail::empty_plan("vidal", source, target);
    detail::append_vidal(plan, plan.source, plan.target, "chi", "xi");
    return plan;
}

/// Greedy protocol for incomparable pairs: ψ → ψ∨φ → χ deterministically, then
/// measure χ → φ. Comparable pairs fall back to plan_vidal.
inline ConversionPlan plan_greedy(const ProbVec &source, const ProbVec &target) {
    detail::check_convertible(source, target);
    if (comparable(source, target)) {
        return plan_vidal(source, target);
    }
    ConversionPlan plan = detail::empty_plan("greedy", source, target);
    NamedState ocp{"ocp", join(source, target)};
    plan.steps.push_back(detail::deterministic_step(plan.source, ocp));
    // The ladder is that of ψ∨φ -> φ; its intermediate state coincides with
    // the one Vidal's protocol builds from ψ.
    detail::append_vidal(plan, ocp, plan.target, "chi", "xi");
    return plan;
}

/// Thrifty protocol for incomparable pairs: ψ → ζ deterministically, measure
/// ζ → ψ∧φ (residual ν on failure), then ψ∧φ → φ deterministically.
/// Comparable pairs fall back to plan_vidal.
inline ConversionPlan plan_thrifty(const ProbVec &source, const ProbVec &target) {
    detail::check_convertible(source, target);
    if (comparable(source, target)) {
        return plan_vidal(source, target);
    }
    ConversionPlan plan = detail::empty_plan("thrifty", source, target);
    NamedState ocr{"ocr", meet(source, target)};
    detail::append_vidal(plan, plan.source, ocr, "zeta", "nu");
    plan.steps.push_back(detail::deterministic_step(ocr, plan.target));
    return plan;
}

inline ConversionPlan plan(std::string_view protocol, const ProbVec &source, const ProbVec &target) {
    if (protocol == "vidal") {
        return plan_vidal(source, target);
    }
    if (protocol == "greedy") {
        return plan_greedy(source, target);
    }
    if (protocol == "thrifty") {
        return plan_thrifty(source, target);
    }
    throw std::invalid_argument("unknown protocol '" + std::string(protocol) + "'");
}

/// Source-side plan for a collection of possible targets: a probabilistic move
/// to the common OCR, after which any target is one deterministic step away.
struct MultiTargetPlan {
    NamedState source;
    std::vector<NamedState> targets;
    NamedState ocr;
    ConversionPlan head;
    std::vector<PlanStep> tails;
    double success_prob = 1.0;
};

inline MultiTargetPlan plan_multi_target(const ProbVec &source, std::span<const NamedState> targets) {
    if (targets.empty()) {
        throw Error(ErrorKind::EmptyCollection, "multi-target plan needs at least one target");
    }
    std::vector<ProbVec> all{source};
    double prob = 1.0;
    for (const auto &t : targets) {
        detail::check_convertible(source, t.state, "target '" + t.name + "'");
        all.push_back(t.state);
        prob = std::min(prob, p_max(source, t.state));
    }

    MultiTargetPlan out;
    out.source = {"psi", source};
    out.targets.assign(targets.begin(), targets.end());
    out.ocr = {"ocr", meet_many(all)};
    out.head = detail::empty_plan("multi-target", source, out.ocr.state);
    out.head.target = out.ocr;
    detail::append_vidal(out.head, out.head.source, out.ocr, "zeta", "nu");
    for (const auto &t : targets) {
        out.tails.push_back(detail::deterministic_step(out.ocr, t));
    }
    out.success_prob = prob;
    return out;
}

/// Target-side plan for a collection of possible sources: each source moves
/// deterministically to the common OCP, which is then converted to the target.
struct MultiSourcePlan {
    std::vector<NamedState> sources;
    NamedState target;
    NamedState ocp;
    std::vector<PlanStep> heads;
    ConversionPlan tail;
    double success_prob = 1.0;
};

inline MultiSourcePlan plan_multi_source(std::span<const NamedState> sources, const ProbVec &target) {
    if (sources.empty()) {
        throw Error(ErrorKind::EmptyCollection, "multi-source plan needs at least one source");
    }
    std::vector<ProbVec> all;
    double prob = 1.0;
    for (const auto &s : sources) {
        if (effective_rank(target) > effective_rank(s.state)) {
            throw Error(ErrorKind::RankDeficit,
                        "source '" + s.name + "' has lower effective rank than the target");
        }
        all.push_back(s.state);
        prob = std::min(prob, p_max(s.state, target));
    }
    all.push_back(target);

    MultiSourcePlan out;
    out.sources.assign(sources.begin(), sources.end());
    out.target = {"phi", target};
    out.ocp = {"ocp", join_many(all)};
    for (const auto &s : sources) {
        out.heads.push_back(detail::deterministic_step(s, out.ocp));
    }
    out.tail = detail::empty_plan("multi-source", out.ocp.state, target);
    out.tail.source = out.ocp;
    detail::append_vidal(out.tail, out.ocp, out.target, "chi", "xi");
    out.success_prob = prob;
    return out;
}

/// Largest violation of "E_l cannot increase on average" over l for one step:
/// max_l (sum_o p_o E_l(out_o) - E_l(in)). Non-positive up to rounding.
inline double monotone_excess(const PlanStep &step) {
    std::size_t d = std::max(step.from.state.dim(), step.to.state.dim());
    if (step.failure) {
        d = std::max(d, step.failure->state.dim());
    }
    const auto ein = monotones(step.from.state, d);
    const auto eto = monotones(step.to.state, d);
    std::optional<MonotoneProfile> efail;
    if (step.failure) {
        efail = monotones(step.failure->state, d);
    }
    const double p = step.kind == StepKind::Deterministic ? 1.0 : step.success_prob;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 1; l <= d; ++l) {
        double avg = p * eto.at(l);
        if (efail) {
            avg += (1.0 - p) * efail->at(l);
        }
        worst = std::max(worst, avg - ein.at(l));
    }
    return worst;
}

/// Structural checks on a plan: deterministic steps respect majorization,
/// Kraus pairs are complete and reproduce the recorded branches, and the
/// overall probability is the product of the step probabilities.
inline void validate(const ConversionPlan &plan) {
    const double eps = epsilon();
    double product = 1.0;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto &step = plan.steps[i];
        const std::string where = "step " + std::to_string(i) + " (" + step.from.name + " -> " + step.to.name + ")";
        if (step.kind == StepKind::Deterministic) {
            if (!majorized_by(step.from.state, step.to.state)) {
                throw Error(ErrorKind::InvalidPlan, where + ": deterministic move violates majorization");
            }
            continue;
        }
        if (!step.kraus) {
            throw Error(ErrorKind::InvalidPlan, where + ": probabilistic step without Kraus diagonals");
        }
        if (step.kraus->completeness_defect() > eps) {
            throw Error(ErrorKind::InvalidPlan, where + ": Kraus operators are not complete");
        }
        if (!(step.success_prob > 0.0 && step.success_prob <= 1.0 + eps)) {
            throw Error(ErrorKind::InvalidPlan, where + ": success probability outside (0, 1]");
        }
        const TwoOutcome outcome = apply_two_outcome(step.from.state, *step.kraus);
        if (std::abs(outcome.success_prob - step.success_prob) > eps ||
            !approx_equal(outcome.success(), step.to.state, eps)) {
            throw Error(ErrorKind::InvalidPlan, where + ": success branch does not match the measurement");
        }
        if (step.failure && !approx_equal(outcome.failure(), step.failure->state, eps)) {
            throw Error(ErrorKind::InvalidPlan, where + ": failure branch does not match the measurement");
        }
        product *= step.success_prob;
    }
    if (std::abs(product - plan.overall_success_prob) > eps) {
        throw Error(ErrorKind::InvalidPlan, "overall success probability is not the product of step probabilities");
    }
}

}  // namespace majlattice
