#pragma once

#include <string>
#include <vector>

namespace riemopt::diag {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // one-line evidence: counts and worst-case values
};

// Retraction axioms: retracting the zero tangent returns the base point, and
// the finite-difference rigidity ratio shrinks by the expected factor.
CheckResult check_retraction_axioms();

// Projected-gradient identities: <P grad f, p> equals <grad f, p> for tangent
// p, and the directional derivative through the retraction matches it with
// first-order convergence.
CheckResult check_gradient_identities();

// The per-unit-step gap between ambient and retracted objective values
// decays monotonically toward zero, and vanishes identically in flat space.
CheckResult check_ambient_gap_decay();

// Every trial step at or below delta = min(1, 2 nu (1 - tau) / L) passes the
// ambient surrogate test, exercised on a two-variable diagonal quadratic.
CheckResult check_cheap_acceptance_threshold();

// In flat space the two-stage search reproduces classical backtracking
// exactly: same exponents, same iterates, mirrored counters.
CheckResult check_flat_space_equivalence();

// Newton with the two-stage search reaches the known optimal values of the
// sphere and orthonormal-frame eigenvalue problems at tight tolerance.
CheckResult check_newton_convergence();

// On identical instances the two-stage search never needs more retractions
// than classical backtracking, with strict savings somewhere, and every
// accepted step re-verifies the sufficient-decrease inequality.
CheckResult check_retraction_savings();

// Replay oracle: the evaluation-argument log of an instrumented objective
// matches the predicted call sequence, and counters match the closed-form
// per-call formulas, across problems, directions, and both strategies.
CheckResult check_counter_exactness();

// All checks in a fixed order matching the list above.
std::vector<CheckResult> run_all();

}  // namespace riemopt::diag
