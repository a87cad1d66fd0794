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

// Walks one incomparable pair through the lattice operations and the three
// single-target protocols, then checks the thrifty plan on the simulator.

#include <iostream>

#include "majlattice/majlattice.hpp"

using namespace majlattice;

int main() {
    const ProbVec psi = canonicalize({0.5, 0.4, 0.1});
    const ProbVec phi = canonicalize({0.6, 0.2, 0.2});

    std::cout << "psi  = " << psi.str() << "\n";
    std::cout << "phi  = " << phi.str() << "\n";
    std::cout << "order: " << to_string(compare(psi, phi)) << "\n";
    std::cout << "meet = " << meet(psi, phi).str() << "\n";
    std::cout << "join = " << join(psi, phi).str() << "\n";
    std::cout << "p_max(psi -> phi) = " << p_max(psi, phi) << "\n\n";

    for (const char *name : {"vidal", "greedy", "thrifty"}) {
        const ConversionPlan p = plan(name, psi, phi);
        validate(p);
        std::cout << name << ": success " << p.overall_success_prob;
        if (p.residual) {
            std::cout << ", on failure " << p.residual->state.str();
        }
        std::cout << "\n";
        for (const auto &step : p.steps) {
            std::cout << "  " << to_string(step.kind) << " " << step.from.name << " -> " << step.to.name << "\n";
        }
    }

    const sim::OutcomeStats stats = sim::run_plan(plan_thrifty(psi, phi), 100000, 7);
    std::cout << "\nthrifty on the simulator: " << stats.successes << "/" << stats.shots << " (expected "
              << stats.expected_rate << " +- " << stats.half_width() << ")\n";
    return 0;
}
