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

// Randomized property sweeps over the lattice operations and protocols.
// Instance i draws from its own generator seeded by (seed, i), so results do
// not depend on how instances are split across threads.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "majlattice/io.hpp"
#include "majlattice/ladder.hpp"
#include "majlattice/lattice.hpp"
#include "majlattice/oracle_sim.hpp"
#include "majlattice/protocols.hpp"
#include "majlattice/random.hpp"
#include "majlattice/schmidt.hpp"

namespace majlattice::sweep {

/// Tolerance for identities that hold exactly in real arithmetic
/// (meet monotones, equal optimal probabilities, Kraus completeness).
inline constexpr double kIdentityTol = 1e-12;
/// Tolerance for the simulator agreeing with spectrum-level arithmetic.
inline constexpr double kOracleTol = 1e-9;

inline const std::vector<std::string> &all_properties() {
    static const std::vector<std::string> names{"lattice", "nielsen", "lemma1",     "lemma2", "thm1",
                                                "thm2",    "thm3",    "multisource", "kraus",  "oracle",
                                                "optimality", "plans", "monotone"};
    return names;
}

struct Instance {
    std::size_t index = 0;
    ProbVec p;
    ProbVec q;
    std::vector<ProbVec> extras;
    std::mt19937_64 rng;

    io::Json echo() const {
        io::Json ex = io::Json::array();
        for (const auto &e : extras) {
            ex.push_back(io::to_json(e));
        }
        return {{"index", index}, {"p", io::to_json(p)}, {"q", io::to_json(q)}, {"extras", ex}};
    }
};

struct Check {
    bool applicable = false;
    bool pass = true;
    /// Most negative partial-sum margin seen by majorization assertions.
    double slack = 0.0;
    /// Largest deviation seen by equality assertions.
    double deviation = 0.0;

    void require_majorized(const ProbVec &lower, const ProbVec &upper) {
        const double m = majorization_margin(lower, upper);
        slack = std::min(slack, m);
        pass = pass && m >= -epsilon();
    }
    void require_close(double a, double b, double tol) {
        const double dev = std::abs(a - b);
        deviation = std::max(deviation, dev);
        pass = pass && dev <= tol;
    }
    void require_close(const ProbVec &a, const ProbVec &b, double tol) {
        const double dev = max_abs_diff(a, b);
        deviation = std::max(deviation, dev);
        pass = pass && dev <= tol;
    }
    void require(bool ok) {
        pass = pass && ok;
    }
};

namespace detail {

inline Check check_lattice(Instance &in) {
    Check c{true};
    const std::size_t d = in.p.dim();
    const ProbVec m = meet(in.p, in.q);
    const ProbVec j = join(in.p, in.q);
    c.require_majorized(m, in.p);
    c.require_majorized(m, in.q);
    c.require_majorized(in.p, j);
    c.require_majorized(in.q, j);

    // Defining properties against random witnesses.
    for (int t = 0; t < 8; ++t) {
        const ProbVec &base = (t & 1) ? in.q : in.p;
        const ProbVec below = (t & 2) ? random_probvec(d, in.rng) : robin_hood(base, 2 * d, in.rng);
        if (majorized_by(below, in.p) && majorized_by(below, in.q)) {
            c.require_majorized(below, m);
        }
        const ProbVec above = (t & 2) ? random_probvec(d, in.rng) : reverse_robin_hood(base, 2 * d, in.rng);
        if (majorized_by(in.p, above) && majorized_by(in.q, above)) {
            c.require_majorized(j, above);
        }
    }

    const double eps = epsilon();
    c.require_close(meet(in.p, in.p), in.p, eps);
    c.require_close(join(in.p, in.p), in.p, eps);
    c.require_close(meet(in.p, j), in.p, eps);
    c.require_close(join(in.p, m), in.p, eps);

    const auto sp = in.p.partial_sums();
    const auto sq = in.q.partial_sums();
    const auto sm = m.partial_sums();
    const auto sj = j.partial_sums();
    for (std::size_t k = 0; k <= d; ++k) {
        c.require_close(sm[k], std::min(sp[k], sq[k]), kIdentityTol);
        c.require(sj[k] >= std::max(sp[k], sq[k]) - eps);
        if (k > 0 && k < d) {
            c.require(sj[k] - sj[k - 1] >= sj[k + 1] - sj[k] - eps);
        }
    }

    std::vector<ProbVec> all{in.p, in.q};
    all.insert(all.end(), in.extras.begin(), in.extras.end());
    const ProbVec mm = meet_many(all);
    const ProbVec jj = join_many(all);
    for (int t = 0; t < 3; ++t) {
        std::shuffle(all.begin(), all.end(), in.rng);
        c.require_close(meet_many(all), mm, eps);
        c.require_close(join_many(all), jj, eps);
    }
    return c;
}

inline Check check_nielsen(Instance &in) {
    Check c{true};
    const bool deterministic = p_max(in.p, in.q) >= 1.0 - epsilon();
    c.require(deterministic == majorized_by(in.p, in.q));
    return c;
}

inline Check check_lemma1(Instance &in) {
    Check c{true};
    const auto em = monotones(meet(in.p, in.q));
    const auto ep = monotones(in.p);
    const auto eq = monotones(in.q);
    for (std::size_t l = 1; l <= em.dim(); ++l) {
        c.require_close(em.at(l), std::max(ep.at(l), eq.at(l)), kIdentityTol);
    }
    return c;
}

inline Check check_lemma2(Instance &in) {
    Check c{true};
    const HadamardInstance h = random_hadamard_instance(in.p.dim(), in.rng);
    c.require_majorized(hadamard(h.a, h.x), hadamard(h.a, h.y));
    return c;
}

inline Check check_thm1(Instance &in) {
    Check c;
    if (compare(in.p, in.q) != MajOrder::Incomparable) {
        return c;
    }
    c.applicable = true;
    c.require_close(ratio_ladder(in.p, meet(in.p, in.q)).r1(), ratio_ladder(in.p, in.q).r1(), kIdentityTol);
    return c;
}

inline Check check_thm2(Instance &in) {
    Check c;
    if (compare(in.p, in.q) != MajOrder::Incomparable) {
        return c;
    }
    c.applicable = true;
    const ProbVec ocr = meet(in.p, in.q);
    const RatioLadder to_target = ratio_ladder(in.p, in.q);
    const RatioLadder to_ocr = ratio_ladder(in.p, ocr);
    const ProbVec chi = hadamard(r_vector(to_target), in.q);
    const ProbVec zeta = hadamard(r_vector(to_ocr), ocr);
    const ProbVec xi = apply_two_outcome(chi, kraus_diagonals(to_target)).failure();
    const ProbVec nu = apply_two_outcome(zeta, kraus_diagonals(to_ocr)).failure();
    c.require_majorized(zeta, chi);
    c.require_majorized(nu, xi);
    // Both conversions share one r-vector.
    const auto ra = r_vector(to_target);
    const auto rb = r_vector(to_ocr);
    for (std::size_t i = 0; i < ra.size(); ++i) {
        c.require_close(ra[i], rb[i], epsilon());
    }
    return c;
}

inline Check check_thm3(Instance &in) {
    Check c{true};
    std::vector<ProbVec> all{in.p};
    double expected = 1.0;
    for (const auto &t : in.extras) {
        all.push_back(t);
        expected = std::min(expected, p_max(in.p, t));
    }
    c.require_close(p_max(in.p, meet_many(all)), expected, kIdentityTol);
    return c;
}

inline Check check_multisource(Instance &in) {
    Check c{true};
    std::vector<ProbVec> all = in.extras;
    double expected = 1.0;
    for (const auto &s : in.extras) {
        expected = std::min(expected, p_max(s, in.q));
    }
    all.push_back(in.q);
    c.require_close(p_max(join_many(all), in.q), expected, kIdentityTol);
    return c;
}

inline Check check_kraus(Instance &in) {
    Check c{true};
    const RatioLadder ladder = ratio_ladder(in.p, in.q);
    const KrausDiagonals k = kraus_diagonals(ladder);
    c.deviation = k.completeness_defect();
    c.require(c.deviation <= kIdentityTol);
    for (std::size_t i = 0; i + 1 < k.dim(); ++i) {
        c.require(k.m[i] <= k.m[i + 1]);
    }
    for (std::size_t i = ladder.rungs.front().level; i <= ladder.dim; ++i) {
        c.require(k.n[i - 1] == 0.0);
    }
    return c;
}

inline Eigen::MatrixXd random_orthogonal(std::size_t d, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            g(i, j) = normal(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ();
}

inline Check check_oracle(Instance &in) {
    Check c;
    if (majorized_by(in.p, in.q)) {
        return c;
    }
    c.applicable = true;
    const RatioLadder ladder = ratio_ladder(in.p, in.q);
    const ProbVec chi = hadamard(r_vector(ladder), in.q);
    const KrausDiagonals k = kraus_diagonals(ladder);
    const TwoOutcome analytic = apply_two_outcome(chi, k);

    // Schmidt basis, then a random local frame with the operators rotated alongside.
    const std::size_t d = chi.dim();
    const Eigen::MatrixXd u = random_orthogonal(d, in.rng);
    const Eigen::MatrixXd v = random_orthogonal(d, in.rng);
    const sim::BipartiteState plain = sim::embed(chi);
    const sim::BipartiteState rotated = plain.apply_local(u, v);
    const Eigen::MatrixXd mr = u * sim::diagonal_operator(k.m) * u.transpose();
    const Eigen::MatrixXd nr = u * sim::diagonal_operator(k.n) * u.transpose();

    const auto s_plain = sim::branch(plain, k, sim::Outcome::Success);
    const auto f_plain = sim::branch(plain, k, sim::Outcome::Failure);
    const auto s_rot = sim::branch(rotated, mr);
    const auto f_rot = sim::branch(rotated, nr);
    for (const auto *s : {&s_plain, &s_rot}) {
        c.require_close(s->probability, analytic.success_prob, kOracleTol);
        c.require_close(sim::schmidt_spectrum(s->post), analytic.success(), kOracleTol);
    }
    for (const auto *f : {&f_plain, &f_rot}) {
        c.require_close(f->probability, 1.0 - analytic.success_prob, kOracleTol);
        c.require_close(sim::schmidt_spectrum(f->post), analytic.failure(), kOracleTol);
    }
    c.require_close(s_plain.probability + f_plain.probability, 1.0, kOracleTol);
    return c;
}

inline Check check_optimality(Instance &in) {
    Check c;
    if (compare(in.p, in.q) != MajOrder::Incomparable) {
        return c;
    }
    c.applicable = true;
    const auto v = plan_vidal(in.p, in.q);
    const auto g = plan_greedy(in.p, in.q);
    const auto t = plan_thrifty(in.p, in.q);
    c.require_close(g.overall_success_prob, v.overall_success_prob, kIdentityTol);
    c.require_close(t.overall_success_prob, v.overall_success_prob, kIdentityTol);
    // Greedy's intermediate state coincides with Vidal's.
    c.require_close(g.probabilistic_step()->from.state, v.probabilistic_step()->from.state, epsilon());
    return c;
}

inline std::vector<ConversionPlan> all_plans(const Instance &in) {
    return {plan_vidal(in.p, in.q), plan_greedy(in.p, in.q), plan_thrifty(in.p, in.q)};
}

inline Check check_plans(Instance &in) {
    Check c{true};
    for (const auto &plan : all_plans(in)) {
        try {
            validate(plan);
        } catch (const Error &) {
            c.require(false);
        }
        for (const auto &step : plan.steps) {
            if (step.kind == StepKind::Deterministic) {
                c.require_majorized(step.from.state, step.to.state);
            } else if (step.failure) {
                c.require(effective_rank(step.failure->state) < effective_rank(step.to.state));
            }
        }
    }
    return c;
}

inline Check check_monotone(Instance &in) {
    Check c{true};
    for (const auto &plan : all_plans(in)) {
        for (const auto &step : plan.steps) {
            const double excess = monotone_excess(step);
            c.slack = std::min(c.slack, -excess);
            c.require(excess <= epsilon());
        }
    }
    return c;
}

inline Check run_check(const std::string &name, Instance &in) {
    if (name == "lattice") return check_lattice(in);
    if (name == "nielsen") return check_nielsen(in);
    if (name == "lemma1") return check_lemma1(in);
    if (name == "lemma2") return check_lemma2(in);
    if (name == "thm1") return check_thm1(in);
    if (name == "thm2") return check_thm2(in);
    if (name == "thm3") return check_thm3(in);
    if (name == "multisource") return check_multisource(in);
    if (name == "kraus") return check_kraus(in);
    if (name == "oracle") return check_oracle(in);
    if (name == "optimality") return check_optimality(in);
    if (name == "plans") return check_plans(in);
    if (name == "monotone") return check_monotone(in);
    throw std::invalid_argument("unknown property '" + name + "'");
}

}  // namespace detail

struct SweepConfig {
    std::size_t dim = 4;
    std::size_t count = 1000;
    std::uint64_t seed = 1;
    std::vector<std::string> properties = all_properties();
    std::size_t threads = 1;
    std::size_t max_echo = 10;
};

struct PropertyTally {
    std::string name;
    std::size_t applicable = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    double worst_slack = 0.0;
    double max_deviation = 0.0;
    std::vector<io::Json> failing;
};

struct SweepReport {
    SweepConfig config;
    std::vector<PropertyTally> tallies;

    bool ok() const {
        return std::all_of(tallies.begin(), tallies.end(), [](const auto &t) { return t.failed == 0; });
    }

    io::Json to_json() const {
        io::Json props = io::Json::array();
        for (const auto &t : tallies) {
            props.push_back({{"name", t.name},
                             {"applicable", t.applicable},
                             {"passed", t.passed},
                             {"failed", t.failed},
                             {"worst_slack", t.worst_slack},
                             {"max_deviation", t.max_deviation},
                             {"failing", t.failing}});
        }
        return {{"dim", config.dim},
                {"count", config.count},
                {"seed", config.seed},
                {"distribution", "uniform simplex (Dirichlet(1,...,1)), sorted descending"},
                {"rng", sim::rng_algorithm()},
                {"epsilon", epsilon()},
                {"properties", props},
                {"ok", ok()}};
    }
};

inline Instance make_instance(const SweepConfig &cfg, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    Instance in;
    in.index = index;
    in.rng.seed(seq);
    in.p = random_probvec(cfg.dim, in.rng);
    in.q = random_probvec(cfg.dim, in.rng);
    const std::size_t m = 2 + in.rng() % 3;
    for (std::size_t j = 0; j < m; ++j) {
        in.extras.push_back(random_probvec(cfg.dim, in.rng));
    }
    return in;
}

inline SweepReport run(const SweepConfig &cfg) {
    if (cfg.dim < 2) {
        throw std::invalid_argument("sweep dimension must be at least 2");
    }
    if (cfg.count < 1) {
        throw std::invalid_argument("sweep count must be at least 1");
    }
    for (const auto &name : cfg.properties) {
        const auto &known = all_properties();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            throw std::invalid_argument("unknown property '" + name + "'");
        }
    }

    const std::size_t np = cfg.properties.size();
    std::vector<std::size_t> stream(np);
    for (std::size_t k = 0; k < np; ++k) {
        const auto &known = all_properties();
        stream[k] = static_cast<std::size_t>(std::find(known.begin(), known.end(), cfg.properties[k]) - known.begin());
    }
    std::vector<Check> results(cfg.count * np);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t k = 0; k < np; ++k) {
                Instance in = make_instance(cfg, i);
                // Each property gets its own stream so selecting a subset of
                // properties does not change the others' witnesses.
                in.rng.discard(stream[k] * 1024);
                try {
                    results[i * np + k] = detail::run_check(cfg.properties[k], in);
                } catch (const Error &) {
                    // A library error on a valid random instance counts as a failure.
                    results[i * np + k] = Check{true, false};
                }
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, cfg.count));
    if (threads == 1) {
        work(0, cfg.count);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cfg.count + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(cfg.count, b + chunk);
            if (b < e) {
                pool.emplace_back(work, b, e);
            }
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    SweepReport report;
    report.config = cfg;
    for (std::size_t k = 0; k < np; ++k) {
        PropertyTally t;
        t.name = cfg.properties[k];
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const auto &c = results[i * np + k];
            if (!c.applicable) {
                continue;
            }
            ++t.applicable;
            t.worst_slack = std::min(t.worst_slack, c.slack);
            t.max_deviation = std::max(t.max_deviation, c.deviation);
            if (c.pass) {
                ++t.passed;
            } else {
                ++t.failed;
                if (t.failing.size() < cfg.max_echo) {
                    t.failing.push_back(make_instance(cfg, i).echo());
                }
            }
        }
        report.tallies.push_back(std::move(t));
    }
    return report;
}

}  // namespace majlattice::sweep
