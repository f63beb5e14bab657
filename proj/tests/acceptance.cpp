// Gate binary: runs every diagnostic suite once, one verdict line each, with
// the wall-clock budget pinned next to the suite it applies to. Exit status
// is the number of failed lines.
#include <chrono>
#include <cstdio>

#include "riemopt/diag.hpp"

int main() {
    using riemopt::diag::CheckResult;
    struct Criterion {
        CheckResult (*run)();
        double budget_s;  // 0 means no budget enforced
    };
    const Criterion criteria[] = {
        {riemopt::diag::check_retraction_axioms, 5.0},
        {riemopt::diag::check_gradient_identities, 5.0},
        {riemopt::diag::check_ambient_gap_decay, 2.0},
        {riemopt::diag::check_cheap_acceptance_threshold, 2.0},
        {riemopt::diag::check_flat_space_equivalence, 2.0},
        {riemopt::diag::check_newton_convergence, 30.0},
        {riemopt::diag::check_retraction_savings, 30.0},
        {riemopt::diag::check_counter_exactness, 0.0},
    };

    int failures = 0, index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        const CheckResult r = c.run();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = c.budget_s <= 0.0 || secs < c.budget_s;
        const bool passed = r.passed && in_budget;
        if (c.budget_s > 0.0) {
            std::printf("%s  criterion %d  %s: %s (%.2fs, budget %.0fs%s)\n",
                        passed ? "PASS" : "FAIL", index, r.name.c_str(), r.detail.c_str(), secs,
                        c.budget_s, in_budget ? "" : " EXCEEDED");
        } else {
            std::printf("%s  criterion %d  %s: %s (%.2fs)\n", passed ? "PASS" : "FAIL", index,
                        r.name.c_str(), r.detail.c_str(), secs);
        }
        if (!passed) ++failures;
    }
    std::printf("%d/8 criteria passed\n", 8 - failures);
    return failures;
}
