#ifndef MAGOPT_ACCEPTANCE_HPP
#define MAGOPT_ACCEPTANCE_HPP

#include <ostream>
#include <string>
#include <vector>

namespace magopt::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

int criterion_count();
std::string criterion_name(int id);

/// Runs one numbered check of the built-in verification suite.
CriterionResult run_criterion(int id);

/// Runs the listed checks (all when ids is empty), printing one PASS/FAIL line
/// per criterion. Returns the number of failures.
int run_suite(std::ostream& out, const std::vector<int>& ids = {});

}  // namespace magopt::acceptance

#endif
