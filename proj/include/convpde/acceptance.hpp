#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace convpde {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The release gate: ten end-to-end checks covering operator accuracy, linear
/// decay, manufactured-solution convergence, the dissipative/blow-up dichotomy
/// for all four models, the blow-up time estimator, and the weighted flux
/// identity. Each check traps its own exceptions and reports them as failures.
std::vector<CriterionResult> run_acceptance();

/// Runs the suite and prints one pass/fail line per criterion. Returns true
/// when every criterion passed.
bool report_acceptance(std::ostream& os);

}  // namespace convpde
