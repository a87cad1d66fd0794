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

// Command-line front end. Kept in a header so the test suite can drive it
// in-process with captured streams.
//
// Exit codes: 0 success, 1 domain error (or a failing sweep), 2 usage error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "majlattice/majlattice.hpp"

namespace majlattice::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

using io::Json;

/// {"vectors": {name: [..]}, "pairs": [[a, b], ...], "collections": [[a, b, c, ...], ...]}
struct InstanceFile {
    std::map<std::string, ProbVec> vectors;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::vector<std::string>> collections;

    static InstanceFile load(const std::string &path) {
        std::ifstream in(path);
        if (!in) {
            throw UsageError("cannot open instance file '" + path + "'");
        }
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::parse_error &e) {
            throw UsageError("malformed instance file '" + path + "': " + e.what());
        }
        return from_json(j);
    }

    static InstanceFile from_json(const Json &j) {
        InstanceFile f;
        if (!j.is_object() || !j.contains("vectors") || !j.at("vectors").is_object()) {
            throw UsageError("instance file needs a \"vectors\" object");
        }
        for (const auto &[name, vec] : j.at("vectors").items()) {
            try {
                f.vectors.emplace(name, io::probvec_from_json(vec));
            } catch (const Error &e) {
                throw Error(e.kind(), "vector '" + name + "': " + e.message());
            } catch (const std::invalid_argument &e) {
                throw UsageError("vector '" + name + "': " + e.what());
            }
        }
        auto check_ref = [&](const std::string &name) {
            if (!f.vectors.count(name)) {
                throw UsageError("instance file references unknown vector '" + name + "'");
            }
            return name;
        };
        if (j.contains("pairs")) {
            for (const auto &p : j.at("pairs")) {
                if (!p.is_array() || p.size() != 2) {
                    throw UsageError("each pair must list exactly two vector names");
                }
                f.pairs.emplace_back(check_ref(p[0].get<std::string>()), check_ref(p[1].get<std::string>()));
            }
        }
        if (j.contains("collections")) {
            for (const auto &c : j.at("collections")) {
                std::vector<std::string> names;
                for (const auto &n : c) {
                    names.push_back(check_ref(n.get<std::string>()));
                }
                if (names.empty()) {
                    throw UsageError("empty collection in instance file");
                }
                f.collections.push_back(std::move(names));
            }
        }
        return f;
    }

    Json to_json() const {
        Json vs = Json::object();
        for (const auto &[name, v] : vectors) {
            vs[name] = io::to_json(v);
        }
        Json out = {{"vectors", vs}};
        if (!pairs.empty()) {
            Json ps = Json::array();
            for (const auto &[a, b] : pairs) {
                ps.push_back({a, b});
            }
            out["pairs"] = ps;
        }
        return out;
    }
};

class App {
   public:
    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
        CLI::App app{"Majorization-lattice tools for pure-state entanglement conversion", "majlattice"};
        app.require_subcommand(1);
        app.fallthrough();
        app.add_option("--epsilon", epsilon_, "Tolerance for normalization and majorization tests")
            ->check(CLI::PositiveNumber);
        app.add_option("--seed", seed_, "Seed for random generation and simulation");
        app.add_option("--format", format_, "Output format")->check(CLI::IsMember({"json", "csv", "dot"}));
        app.add_option("--output,-o", output_, "Write output to FILE instead of stdout");
        app.add_option("--instances,-i", instances_path_, "InstanceFile with named vectors");

        auto *cmp = app.add_subcommand("compare", "Majorization order of two vectors");
        cmp->add_option("vectors", vectors_, "Two inline JSON arrays or instance names");
        auto *mt = app.add_subcommand("meet", "Meet (optimal common resource) of two or more vectors");
        mt->add_option("vectors", vectors_, "Inline JSON arrays or instance names");
        auto *jn = app.add_subcommand("join", "Join (optimal common product) of two or more vectors");
        jn->add_option("vectors", vectors_, "Inline JSON arrays or instance names");
        auto *pm = app.add_subcommand("pmax", "Optimal conversion probability source -> target");
        pm->add_option("vectors", vectors_, "Source and target");
        auto *ld = app.add_subcommand("ladder", "Ratio ladder, r-vector and intermediate state");
        ld->add_option("vectors", vectors_, "Source and target");

        auto *pl = app.add_subcommand("plan", "Conversion plan for a protocol");
        pl->add_option("protocol", protocol_, "vidal | greedy | thrifty | multi-target | multi-source")
            ->required()
            ->check(CLI::IsMember({"vidal", "greedy", "thrifty", "multi-target", "multi-source"}));
        pl->add_option("vectors", vectors_,
                       "Source and target; multi-target: source then targets; multi-source: sources then target");
        pl->add_flag("--dot", dot_, "Emit a Graphviz digraph");

        auto *sw = app.add_subcommand("sweep", "Randomized property sweep");
        sw->add_option("--dim", dim_, "Vector dimension")->check(CLI::Range(2, 1 << 20));
        sw->add_option("--count", count_, "Number of random instances")->check(CLI::PositiveNumber);
        sw->add_option("--properties", properties_, "Comma-separated property names")->delimiter(',');
        sw->add_option("--threads", threads_, "Worker threads")->check(CLI::PositiveNumber);

        auto *sim = app.add_subcommand("simulate", "Monte Carlo run of a plan on the dense simulator");
        sim->add_option("--plan", plan_path_, "Plan JSON written by `plan`");
        sim->add_option("protocol", protocol_, "vidal | greedy | thrifty (when no --plan)")
            ->check(CLI::IsMember({"vidal", "greedy", "thrifty"}));
        sim->add_option("vectors", vectors_, "Source and target (when no --plan)");
        sim->add_option("--shots", shots_, "Number of shots")->check(CLI::PositiveNumber);

        auto *rnd = app.add_subcommand("random", "Random instance file (uniform on the simplex, sorted)");
        rnd->add_option("--dim", dim_, "Vector dimension")->check(CLI::Range(1, 1 << 20));
        rnd->add_option("--count", count_, "Number of vectors (or pairs with --incomparable)")
            ->check(CLI::PositiveNumber);
        rnd->add_flag("--incomparable", incomparable_, "Emit incomparable pairs");

        // CLI11 splits "[a,b,c]" into three values; a leading space keeps an
        // inline vector in one piece and the JSON parser skips it.
        std::vector<std::string> argv_storage{"majlattice"};
        for (const auto &a : args) {
            argv_storage.push_back(!a.empty() && a.front() == '[' ? " " + a : a);
        }
        std::vector<char *> argv;
        for (auto &a : argv_storage) {
            argv.push_back(a.data());
        }
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kOk : kUsageError;
        }

        try {
            set_epsilon(epsilon_);
            // A lone positional naming a file is taken as the instance file.
            if (instances_path_.empty() && vectors_.size() == 1 && vectors_[0].find('[') == std::string::npos &&
                std::filesystem::is_regular_file(vectors_[0])) {
                instances_path_ = vectors_[0];
                vectors_.clear();
            }
            if (!instances_path_.empty()) {
                instances_ = InstanceFile::load(instances_path_);
            }
            std::string text;
            int code = kOk;
            if (cmp->parsed()) {
                text = cmd_compare();
            } else if (mt->parsed()) {
                text = cmd_lattice(true);
            } else if (jn->parsed()) {
                text = cmd_lattice(false);
            } else if (pm->parsed()) {
                text = cmd_pmax();
            } else if (ld->parsed()) {
                text = cmd_ladder();
            } else if (pl->parsed()) {
                text = cmd_plan();
            } else if (sw->parsed()) {
                text = cmd_sweep(code);
            } else if (sim->parsed()) {
                text = cmd_simulate();
            } else if (rnd->parsed()) {
                text = cmd_random();
            }
            emit(text, out);
            return code;
        } catch (const Error &e) {
            err << "error: " << e.what() << "\n";
            return kDomainError;
        } catch (const UsageError &e) {
            err << "usage error: " << e.what() << "\n";
            return kUsageError;
        } catch (const std::invalid_argument &e) {
            err << "usage error: " << e.what() << "\n";
            return kUsageError;
        } catch (const Json::exception &e) {
            err << "usage error: " << e.what() << "\n";
            return kUsageError;
        }
    }

   private:
    // ---- input resolution -------------------------------------------------

    NamedState resolve(const std::string &arg, const std::string &inline_name) const {
        const auto first = arg.find_first_not_of(' ');
        if (first != std::string::npos && arg[first] == '[') {
            Json j;
            try {
                j = Json::parse(arg);
            } catch (const Json::parse_error &e) {
                throw UsageError("malformed vector '" + arg + "'");
            }
            try {
                return {inline_name, io::probvec_from_json(j)};
            } catch (const Error &e) {
                throw Error(e.kind(), "vector " + arg + ": " + e.message());
            }
        }
        if (!instances_) {
            throw UsageError("'" + arg + "' is not a JSON array and no --instances file was given");
        }
        auto it = instances_->vectors.find(arg);
        if (it == instances_->vectors.end()) {
            throw UsageError("unknown vector name '" + arg + "'");
        }
        return {arg, it->second};
    }

    std::vector<NamedState> resolve_all(const std::vector<std::string> &names, const std::string &prefix) const {
        std::vector<NamedState> out;
        for (std::size_t i = 0; i < names.size(); ++i) {
            out.push_back(resolve(names[i], prefix + std::to_string(i + 1)));
        }
        return out;
    }

    /// Inputs for a binary command: the two positionals, or every pair of the
    /// instance file when none are given.
    std::vector<std::pair<NamedState, NamedState>> binary_inputs() const {
        if (vectors_.size() == 2) {
            return {{resolve(vectors_[0], "psi"), resolve(vectors_[1], "phi")}};
        }
        if (vectors_.empty() && instances_ && !instances_->pairs.empty()) {
            std::vector<std::pair<NamedState, NamedState>> out;
            for (const auto &[a, b] : instances_->pairs) {
                out.emplace_back(resolve(a, a), resolve(b, b));
            }
            return out;
        }
        throw UsageError("expected two vectors (or an --instances file with \"pairs\")");
    }

    /// Inputs for an n-ary command: the positionals, or the instance file's
    /// collections (falling back to its pairs).
    std::vector<std::vector<NamedState>> collection_inputs(std::size_t min_size, const std::string &prefix) const {
        if (!vectors_.empty()) {
            if (vectors_.size() < min_size) {
                throw UsageError("expected at least " + std::to_string(min_size) + " vectors");
            }
            return {resolve_all(vectors_, prefix)};
        }
        std::vector<std::vector<NamedState>> out;
        if (instances_) {
            for (const auto &c : instances_->collections) {
                std::vector<NamedState> group;
                for (const auto &n : c) {
                    group.push_back(resolve(n, n));
                }
                if (group.size() < min_size) {
                    throw UsageError("collection needs at least " + std::to_string(min_size) + " vectors");
                }
                out.push_back(std::move(group));
            }
            if (out.empty()) {
                for (const auto &[a, b] : instances_->pairs) {
                    out.push_back({resolve(a, a), resolve(b, b)});
                }
            }
        }
        if (out.empty()) {
            throw UsageError("expected vectors (or an --instances file with \"collections\" or \"pairs\")");
        }
        return out;
    }

    // ---- output -----------------------------------------------------------

    static std::string dump(const Json &j) {
        return j.dump() + "\n";
    }

    bool from_file() const {
        return vectors_.empty();
    }

    /// Inline inputs give one object; instance-file inputs give an array with
    /// the input names attached to each entry.
    std::string dump_results(const std::vector<Json> &results) const {
        if (!from_file()) {
            return dump(results.front());
        }
        return dump(Json(results));
    }

    void require_single_for_csv(std::size_t n) const {
        if (n != 1) {
            throw UsageError("csv output needs exactly one input");
        }
    }

    void emit(const std::string &text, std::ostream &out) const {
        if (output_.empty()) {
            out << text;
            return;
        }
        std::ofstream f(output_);
        if (!f) {
            throw UsageError("cannot write '" + output_ + "'");
        }
        f << text;
    }

    static Json with_names(Json j, const std::vector<std::string> &names) {
        Json out = {{"inputs", names}};
        for (auto &[k, v] : j.items()) {
            out[k] = v;
        }
        return out;
    }

    static std::string csv_row(std::initializer_list<std::string> cells) {
        std::string row;
        for (const auto &c : cells) {
            row += (row.empty() ? "" : ",") + c;
        }
        return row + "\n";
    }

    static std::string num(double x) {
        return io::format_double(x);
    }

    void reject_dot() const {
        if (format_ == "dot") {
            throw UsageError("dot output is only available for `plan`");
        }
    }

    // ---- subcommands ------------------------------------------------------

    std::string cmd_compare() const {
        reject_dot();
        const auto inputs = binary_inputs();
        if (format_ == "csv") {
            require_single_for_csv(inputs.size());
            const auto &[p, q] = inputs.front();
            const std::size_t d = common_dim(p.state, q.state);
            const auto sp = cumulative_sums(p.state, d);
            const auto sq = cumulative_sums(q.state, d);
            std::string s = csv_row({"k", "S_" + p.name, "S_" + q.name});
            for (std::size_t k = 0; k <= d; ++k) {
                s += csv_row({std::to_string(k), num(sp[k]), num(sq[k])});
            }
            return s;
        }
        std::vector<Json> results;
        for (const auto &[p, q] : inputs) {
            Json j = {{"order", std::string(to_string(compare(p.state, q.state)))},
                      {"margin_pq", majorization_margin(p.state, q.state)},
                      {"margin_qp", majorization_margin(q.state, p.state)}};
            results.push_back(from_file() ? with_names(j, {p.name, q.name}) : j);
        }
        return dump_results(results);
    }

    std::string cmd_lattice(bool is_meet) const {
        reject_dot();
        const auto groups = collection_inputs(2, "v");
        std::vector<Json> results;
        std::string csv;
        for (const auto &g : groups) {
            std::vector<ProbVec> vs;
            std::vector<std::string> names;
            for (const auto &n : g) {
                vs.push_back(n.state);
                names.push_back(n.name);
            }
            const ProbVec r = is_meet ? meet_many(vs) : join_many(vs);
            const auto s = r.partial_sums();
            if (format_ == "csv") {
                require_single_for_csv(groups.size());
                csv = csv_row({"i", "value", "cumsum"});
                for (std::size_t i = 0; i < r.dim(); ++i) {
                    csv += csv_row({std::to_string(i + 1), num(r[i]), num(s[i + 1])});
                }
                return csv;
            }
            Json j = {{"result", io::to_json(r)}, {"cumsum", std::vector<double>(s.begin() + 1, s.end())}};
            results.push_back(from_file() ? with_names(j, names) : j);
        }
        return dump_results(results);
    }

    std::string cmd_pmax() const {
        reject_dot();
        const auto inputs = binary_inputs();
        std::vector<Json> results;
        for (const auto &[p, q] : inputs) {
            const double v = p_max(p.state, q.state);
            if (format_ == "csv") {
                require_single_for_csv(inputs.size());
                return csv_row({"p_max"}) + csv_row({num(v)});
            }
            Json j = {{"p_max", v}};
            results.push_back(from_file() ? with_names(j, {p.name, q.name}) : j);
        }
        return dump_results(results);
    }

    std::string cmd_ladder() const {
        reject_dot();
        const auto inputs = binary_inputs();
        std::vector<Json> results;
        for (const auto &[p, q] : inputs) {
            const RatioLadder ladder = ratio_ladder(p.state, q.state);
            const std::size_t d = ladder.dim;
            const auto ep = monotones(p.state, d);
            const auto eq = monotones(q.state, d);
            if (format_ == "csv") {
                require_single_for_csv(inputs.size());
                std::string s = csv_row({"l", "E_" + p.name, "E_" + q.name, "ratio"});
                for (std::size_t l = 1; l <= d; ++l) {
                    const std::string ratio = eq.at(l) > epsilon() ? num(ep.at(l) / eq.at(l)) : "";
                    s += csv_row({std::to_string(l), num(ep.at(l)), num(eq.at(l)), ratio});
                }
                return s;
            }
            Json j = {{"p_max", p_max(p.state, q.state)},
                      {"ladder", io::to_json(ladder)},
                      {"r_vector", r_vector(ladder)},
                      {"intermediate", io::to_json(hadamard(r_vector(ladder), q.state))},
                      {"kraus", io::to_json(kraus_diagonals(ladder))},
                      {"monotones", {{"source", io::to_json(ep)}, {"target", io::to_json(eq)}}}};
            results.push_back(from_file() ? with_names(j, {p.name, q.name}) : j);
        }
        return dump_results(results);
    }

    static std::string planning_context(const std::string &what, const std::vector<std::string> &names) {
        std::string s = what + " [";
        for (std::size_t i = 0; i < names.size(); ++i) {
            s += (i ? ", " : "") + names[i];
        }
        return s + "]: ";
    }

    std::string cmd_plan() const {
        if (format_ == "csv") {
            throw UsageError("plans are emitted as json or dot");
        }
        const bool dot = dot_ || format_ == "dot";
        std::vector<std::string> texts;
        std::vector<Json> results;

        auto add = [&](auto &&plan) {
            if (dot) {
                texts.push_back(io::to_dot(plan));
            } else {
                results.push_back(io::to_json(plan));
            }
        };

        if (protocol_ == "multi-target" || protocol_ == "multi-source") {
            const bool targets = protocol_ == "multi-target";
            for (auto &g : collection_inputs(2, targets ? "phi" : "psi")) {
                std::vector<std::string> names;
                for (const auto &n : g) {
                    names.push_back(n.name);
                }
                try {
                    if (targets) {
                        const NamedState source = g.front();
                        std::vector<NamedState> rest(g.begin() + 1, g.end());
                        if (!vectors_.empty()) {
                            g.front().name = "psi";
                        }
                        add(plan_multi_target(source.state, rest));
                    } else {
                        const NamedState target = g.back();
                        std::vector<NamedState> rest(g.begin(), g.end() - 1);
                        add(plan_multi_source(rest, target.state));
                    }
                } catch (const Error &e) {
                    throw Error(e.kind(), planning_context(protocol_, names) + e.message());
                }
            }
        } else {
            for (const auto &[p, q] : binary_inputs()) {
                try {
                    add(plan(protocol_, p.state, q.state));
                } catch (const Error &e) {
                    throw Error(e.kind(), planning_context(protocol_, {p.name, q.name}) + "target '" + q.name +
                                              "' vs source '" + p.name + "': " + e.message());
                }
            }
        }
        if (dot) {
            std::string s;
            for (const auto &t : texts) {
                s += t;
            }
            return s;
        }
        return dump_results(results);
    }

    std::string cmd_sweep(int &code) const {
        reject_dot();
        sweep::SweepConfig cfg;
        cfg.dim = dim_;
        cfg.count = count_;
        cfg.seed = seed_;
        cfg.threads = threads_;
        if (!properties_.empty()) {
            cfg.properties = properties_;
        }
        const sweep::SweepReport report = sweep::run(cfg);
        code = report.ok() ? kOk : kDomainError;
        if (format_ == "csv") {
            std::string s = csv_row({"property", "applicable", "passed", "failed", "worst_slack", "max_deviation"});
            for (const auto &t : report.tallies) {
                s += csv_row({t.name, std::to_string(t.applicable), std::to_string(t.passed),
                              std::to_string(t.failed), num(t.worst_slack), num(t.max_deviation)});
            }
            return s;
        }
        return dump(report.to_json());
    }

    std::string cmd_simulate() const {
        reject_dot();
        ConversionPlan plan;
        if (!plan_path_.empty()) {
            if (!vectors_.empty() || !protocol_.empty()) {
                throw UsageError("give either --plan or a protocol with vectors, not both");
            }
            std::ifstream in(plan_path_);
            if (!in) {
                throw UsageError("cannot open plan file '" + plan_path_ + "'");
            }
            Json j;
            try {
                j = Json::parse(in);
            } catch (const Json::parse_error &e) {
                throw UsageError("malformed plan file: " + std::string(e.what()));
            }
            if (j.is_object() && j.contains("steps")) {
                plan = io::plan_from_json(j);
            } else {
                throw UsageError("plan file must hold a single vidal/greedy/thrifty plan");
            }
        } else {
            if (protocol_.empty()) {
                throw UsageError("simulate needs --plan FILE or a protocol with two vectors");
            }
            const auto inputs = binary_inputs();
            if (inputs.size() != 1) {
                throw UsageError("simulate takes a single pair");
            }
            plan = majlattice::plan(protocol_, inputs.front().first.state, inputs.front().second.state);
        }
        const sim::OutcomeStats stats = sim::run_plan(plan, shots_, seed_);
        if (format_ == "csv") {
            return csv_row({"shots", "successes", "success_rate", "expected_rate", "half_width"}) +
                   csv_row({std::to_string(stats.shots), std::to_string(stats.successes), num(stats.success_rate()),
                            num(stats.expected_rate), num(stats.half_width())});
        }
        Json j = {{"protocol", plan.protocol}};
        const Json fields = io::to_json(stats);
        for (const auto &[k, v] : fields.items()) {
            j[k] = v;
        }
        return dump(j);
    }

    std::string cmd_random() const {
        reject_dot();
        std::mt19937_64 rng(seed_);
        InstanceFile f;
        const int width = static_cast<int>(std::to_string(count_ == 0 ? 0 : 2 * count_ - 1).size());
        auto name = [width](std::size_t i) {
            std::ostringstream os;
            os << "v" << std::setw(width) << std::setfill('0') << i;
            return os.str();
        };
        if (incomparable_) {
            for (std::size_t i = 0; i < count_; ++i) {
                auto pair = random_incomparable_pair(dim_, rng);
                if (!pair) {
                    throw UsageError("no incomparable pairs exist in dimension " + std::to_string(dim_));
                }
                f.vectors.emplace(name(2 * i), pair->first);
                f.vectors.emplace(name(2 * i + 1), pair->second);
                f.pairs.emplace_back(name(2 * i), name(2 * i + 1));
            }
        } else {
            for (std::size_t i = 0; i < count_; ++i) {
                f.vectors.emplace(name(i), random_probvec(dim_, rng));
            }
        }
        if (format_ == "csv") {
            std::string s;
            for (const auto &[n, v] : f.vectors) {
                std::string row = n;
                for (double x : v) {
                    row += "," + num(x);
                }
                s += row + "\n";
            }
            return s;
        }
        return dump(f.to_json());
    }

    double epsilon_ = 1e-9;
    std::uint64_t seed_ = 1;
    std::string format_ = "json";
    std::string output_;
    std::string instances_path_;
    std::optional<InstanceFile> instances_;

    std::vector<std::string> vectors_;
    std::string protocol_;
    bool dot_ = false;
    std::size_t dim_ = 4;
    std::size_t count_ = 1000;
    std::vector<std::string> properties_;
    std::size_t threads_ = 1;
    std::string plan_path_;
    std::uint64_t shots_ = 100000;
    bool incomparable_ = false;
};

inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    App app;
    return app.run(args, out, err);
}

}  // namespace majlattice::cli
