#pragma once

#include <string>
#include <vector>

namespace oreo::verify {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

CriterionResult c1_harmonic_phase_bound();
CriterionResult c2_competitive_ratio();
CriterionResult c3_kdim_analytic();
CriterionResult c4_asymmetric_exhaustive();
CriterionResult c5_parallel_q();
CriterionResult c6_end_to_end();
CriterionResult c7_parameter_sweeps();
CriterionResult c8_oracle_dominance();
CriterionResult c9_dip_directional();

// Runs every criterion in order.
std::vector<CriterionResult> run_all();

// Prints one pass/fail line per criterion; returns true when all passed.
bool report(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace oreo::verify
