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

// JSON and Graphviz serialization of vectors, ladders and plans.
//
// Doubles are written in shortest round-trip form, so a parsed plan carries
// bit-identical numbers.

#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "majlattice/ladder.hpp"
#include "majlattice/oracle_sim.hpp"
#include "majlattice/protocols.hpp"
#include "majlattice/schmidt.hpp"

namespace majlattice::io {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline Json to_json(const ProbVec &p) {
    return Json(p.vector());
}

inline ProbVec probvec_from_json(const Json &j) {
    if (!j.is_array()) {
        throw std::invalid_argument("expected a JSON array of numbers");
    }
    std::vector<double> raw;
    raw.reserve(j.size());
    for (const auto &x : j) {
        if (!x.is_number()) {
            throw std::invalid_argument("expected a JSON array of numbers");
        }
        raw.push_back(x.get<double>());
    }
    return canonicalize(raw);
}

inline Json to_json(const MonotoneProfile &e) {
    return Json(e.values);
}

inline Json to_json(const RatioLadder &ladder) {
    Json rungs = Json::array();
    for (const auto &r : ladder.rungs) {
        rungs.push_back({{"r", r.ratio}, {"l", r.level}});
    }
    return {{"k", ladder.k()}, {"l0", ladder.l0()}, {"rungs", rungs}};
}

inline RatioLadder ladder_from_json(const Json &j) {
    RatioLadder ladder;
    ladder.dim = j.at("l0").get<std::size_t>() - 1;
    for (const auto &r : j.at("rungs")) {
        ladder.rungs.push_back({r.at("r").get<double>(), r.at("l").get<std::size_t>()});
    }
    return ladder;
}

inline Json to_json(const KrausDiagonals &k) {
    return {{"m", k.m}, {"n", k.n}};
}

inline KrausDiagonals kraus_from_json(const Json &j) {
    KrausDiagonals k{j.at("m").get<std::vector<double>>(), j.at("n").get<std::vector<double>>()};
    if (k.m.size() != k.n.size()) {
        throw std::invalid_argument("Kraus diagonals differ in length");
    }
    return k;
}

namespace detail {
inline void add_state(Json &states, const NamedState &s) {
    states[s.name] = to_json(s.state);
}

inline Json step_json(const PlanStep &step, Json &states) {
    add_state(states, step.from);
    add_state(states, step.to);
    Json j = {{"kind", std::string(to_string(step.kind))}, {"from", step.from.name}, {"to", step.to.name}};
    if (step.kind == StepKind::Probabilistic) {
        j["success_prob"] = step.success_prob;
        if (step.kraus) {
            j["kraus"] = to_json(*step.kraus);
        }
        if (step.failure) {
            add_state(states, *step.failure);
            j["failure"] = step.failure->name;
        }
    }
    return j;
}

inline NamedState lookup(const std::map<std::string, ProbVec> &states, const Json &name) {
    const auto key = name.get<std::string>();
    auto it = states.find(key);
    if (it == states.end()) {
        throw std::invalid_argument("plan references unknown state '" + key + "'");
    }
    return {key, it->second};
}

inline std::map<std::string, ProbVec> states_from_json(const Json &j) {
    std::map<std::string, ProbVec> out;
    for (const auto &[name, vec] : j.items()) {
        out.emplace(name, probvec_from_json(vec));
    }
    return out;
}

inline PlanStep step_from_json(const Json &j, const std::map<std::string, ProbVec> &states) {
    PlanStep step;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "deterministic") {
        step.kind = StepKind::Deterministic;
    } else if (kind == "probabilistic") {
        step.kind = StepKind::Probabilistic;
    } else {
        throw std::invalid_argument("unknown step kind '" + kind + "'");
    }
    step.from = lookup(states, j.at("from"));
    step.to = lookup(states, j.at("to"));
    if (step.kind == StepKind::Probabilistic) {
        step.success_prob = j.at("success_prob").get<double>();
        step.kraus = kraus_from_json(j.at("kraus"));
        if (j.contains("failure")) {
            step.failure = lookup(states, j.at("failure"));
        }
    }
    return step;
}

inline Json plan_body(const ConversionPlan &plan, Json &states) {
    add_state(states, plan.source);
    add_state(states, plan.target);
    Json steps = Json::array();
    for (const auto &s : plan.steps) {
        steps.push_back(step_json(s, states));
    }
    Json j = {{"protocol", plan.protocol},
              {"source", plan.source.name},
              {"target", plan.target.name},
              {"ladder", to_json(plan.ladder)},
              {"steps", steps},
              {"success_prob", plan.overall_success_prob}};
    if (plan.residual) {
        j["residual"] = to_json(plan.residual->state);
        j["residual_state"] = plan.residual->name;
    } else {
        j["residual"] = nullptr;
    }
    return j;
}

inline ConversionPlan plan_body_from_json(const Json &j, const std::map<std::string, ProbVec> &states) {
    ConversionPlan plan;
    plan.protocol = j.at("protocol").get<std::string>();
    plan.source = lookup(states, j.at("source"));
    plan.target = lookup(states, j.at("target"));
    plan.ladder = ladder_from_json(j.at("ladder"));
    for (const auto &s : j.at("steps")) {
        plan.steps.push_back(step_from_json(s, states));
    }
    plan.overall_success_prob = j.at("success_prob").get<double>();
    if (j.contains("residual_state")) {
        plan.residual = lookup(states, j.at("residual_state"));
    }
    return plan;
}
}  // namespace detail

/// {"protocol", "source", "target", "states": {name: [..]}, "ladder",
///  "steps": [...], "success_prob", "residual": [..] | null}
inline Json to_json(const ConversionPlan &plan) {
    Json states = Json::object();
    Json body = detail::plan_body(plan, states);
    Json out;
    for (auto &[k, v] : body.items()) {
        out[k] = v;
        if (k == "target") {
            out["states"] = states;
        }
    }
    return out;
}

/// Parses a plan written by to_json and re-validates it.
inline ConversionPlan plan_from_json(const Json &j) {
    const auto states = detail::states_from_json(j.at("states"));
    ConversionPlan plan = detail::plan_body_from_json(j, states);
    validate(plan);
    return plan;
}

inline Json to_json(const MultiTargetPlan &plan) {
    Json states = Json::object();
    detail::add_state(states, plan.source);
    Json targets = Json::array();
    for (const auto &t : plan.targets) {
        detail::add_state(states, t);
        targets.push_back(t.name);
    }
    detail::add_state(states, plan.ocr);
    Json head = detail::plan_body(plan.head, states);
    Json tails = Json::array();
    for (const auto &t : plan.tails) {
        tails.push_back(detail::step_json(t, states));
    }
    return {{"protocol", "multi-target"},
            {"source", plan.source.name},
            {"targets", targets},
            {"ocr", plan.ocr.name},
            {"states", states},
            {"head", head},
            {"tails", tails},
            {"success_prob", plan.success_prob}};
}

inline Json to_json(const MultiSourcePlan &plan) {
    Json states = Json::object();
    Json sources = Json::array();
    for (const auto &s : plan.sources) {
        detail::add_state(states, s);
        sources.push_back(s.name);
    }
    detail::add_state(states, plan.target);
    detail::add_state(states, plan.ocp);
    Json heads = Json::array();
    for (const auto &h : plan.heads) {
        heads.push_back(detail::step_json(h, states));
    }
    Json tail = detail::plan_body(plan.tail, states);
    return {{"protocol", "multi-source"},
            {"sources", sources},
            {"target", plan.target.name},
            {"ocp", plan.ocp.name},
            {"states", states},
            {"heads", heads},
            {"tail", tail},
            {"success_prob", plan.success_prob}};
}

inline Json to_json(const sim::OutcomeStats &s) {
    Json residual = s.residual_mean.empty() ? Json(nullptr) : Json(s.residual_mean);
    return {{"shots", s.shots},
            {"successes", s.successes},
            {"success_rate", s.success_rate()},
            {"expected_rate", s.expected_rate},
            {"half_width", s.half_width()},
            {"within_bound", std::abs(s.success_rate() - s.expected_rate) <= s.half_width()},
            {"residual_mean", residual},
            {"seed", s.seed},
            {"rng", s.rng}};
}

// ---------------------------------------------------------------------------
// Graphviz

namespace detail {
inline std::string dot_label(const NamedState &s) {
    std::ostringstream os;
    os << s.name << "\\n(";
    for (std::size_t i = 0; i < s.state.dim(); ++i) {
        os << (i ? ", " : "") << format_double(s.state[i]);
    }
    os << ")";
    return os.str();
}

class DotWriter {
   public:
    void node(const NamedState &s) {
        if (seen_.emplace(s.name, true).second) {
            nodes_ << "  \"" << s.name << "\" [label=\"" << dot_label(s) << "\"];\n";
        }
    }

    void step(const PlanStep &step) {
        node(step.from);
        node(step.to);
        if (step.kind == StepKind::Deterministic) {
            edges_ << "  \"" << step.from.name << "\" -> \"" << step.to.name << "\" [style=bold];\n";
            return;
        }
        edges_ << "  \"" << step.from.name << "\" -> \"" << step.to.name << "\" [style=dashed, label=\"p="
               << format_double(step.success_prob) << "\"];\n";
        if (step.failure) {
            node(*step.failure);
            edges_ << "  \"" << step.from.name << "\" -> \"" << step.failure->name
                   << "\" [style=dashed, color=gray40, label=\"1-p="
                   << format_double(1.0 - step.success_prob) << "\"];\n";
        }
    }

    std::string finish(const std::string &title) const {
        std::ostringstream os;
        os << "digraph \"" << title << "\" {\n"
           << "  rankdir=TB;\n"
           << "  node [shape=box, fontname=\"Helvetica\"];\n"
           << nodes_.str() << edges_.str() << "}\n";
        return os.str();
    }

   private:
    std::map<std::string, bool> seen_;
    std::ostringstream nodes_;
    std::ostringstream edges_;
};
}  // namespace detail

/// Digraph with one node per state; bold edges are deterministic moves and
/// dashed edges the branches of a measurement.
inline std::string to_dot(const ConversionPlan &plan) {
    detail::DotWriter w;
    for (const auto &s : plan.steps) {
        w.step(s);
    }
    return w.finish(plan.protocol);
}

inline std::string to_dot(const MultiTargetPlan &plan) {
    detail::DotWriter w;
    for (const auto &s : plan.head.steps) {
        w.step(s);
    }
    for (const auto &s : plan.tails) {
        w.step(s);
    }
    return w.finish("multi-target");
}

inline std::string to_dot(const MultiSourcePlan &plan) {
    detail::DotWriter w;
    for (const auto &s : plan.heads) {
        w.step(s);
    }
    for (const auto &s : plan.tail.steps) {
        w.step(s);
    }
    return w.finish("multi-source");
}

}  // namespace majlattice::io
