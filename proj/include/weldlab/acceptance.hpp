// acceptance.hpp - the eight pinned verification criteria, shared by the
// acceptance test binary and the `weldlab suite` command. Every tolerance
// and grid is fixed here.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace weldlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

CriterionResult criterion_completeness();      // 1: k in {2..5} x 20 seeds, 80/80 accepts
CriterionResult criterion_marker_exactness();  // 2: k in {2..5} x 10 seeds, zero mismatches
CriterionResult criterion_walk_crosscheck();   // 3: column vs full 1e-9; p*(k) >= 1/(2k)
CriterionResult criterion_cost_model();        // 4: log-log slope <= 4, R^2 >= 0.95
CriterionResult criterion_hardness();          // 5: advantage <= 0.1; games under c t^2 2^{-k/4}
CriterionResult criterion_simulator_fidelity();// 6: chi-square p > 0.01 at k=10
CriterionResult criterion_distance();          // 7: G1 bipartite, G2 odd cycles, m/96 floor
CriterionResult criterion_census();            // 8: closed forms exact, k in [2,10] x 10 seeds

std::vector<CriterionResult> run_all_criteria();

// Named suite bundles for the CLI: completeness, soundness, walk, hardness,
// distance.
std::vector<CriterionResult> run_suite(const std::string& name);

// The soundness harness behind `suite soundness` (not a numbered criterion):
// G2 instances with four advice families must be rejected with frequency
// >= 2/3 at k=4 over 50 seeds.
CriterionResult soundness_harness();

} // namespace weldlab
