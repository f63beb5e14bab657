#pragma once

#include <string>
#include <utility>
#include <vector>

#include "riemopt/linesearch.hpp"
#include "riemopt/manifolds.hpp"
#include "riemopt/objectives.hpp"

namespace riemopt {

enum class LineSearchKind { Standard, Modified };
enum class DirectionKind { Newton, Steepest };
enum class SolveStatus { Converged, MaxIter, LineSearchFailed };

std::string to_string(LineSearchKind k);
std::string to_string(DirectionKind k);
std::string to_string(SolveStatus s);

struct SolverConfig {
    double tol_grad = 1e-8;
    int max_iter = 500;
    double nu = 1e-3;   // lower clamp for the model spectrum
    double rho = 1e6;   // upper clamp for the model spectrum
    LineSearchKind linesearch = LineSearchKind::Modified;
    DirectionKind direction = DirectionKind::Newton;
    LineSearchParams params{};
};

// One row per outer iteration. A terminating row (convergence observed, or a
// failed line search) has ell = -1 and step_alpha = 0. Counters are the work
// spent during that iteration only.
struct IterationRecord {
    int iter = 0;
    double f = 0.0;
    double grad_norm = 0.0;
    double step_alpha = 0.0;
    int ell = -1;
    double direction_norm = 0.0;
    double slope = 0.0;  // <grad, direction> at this iterate
    EvalCounters counters;
};

struct SolverTrace {
    explicit SolverTrace(ManifoldPoint start) : final_point(std::move(start)) {}

    std::vector<IterationRecord> records;
    SolveStatus status = SolveStatus::MaxIter;
    ManifoldPoint final_point;
    double f_final = 0.0;
    double grad_norm_final = 0.0;
    // Whole-run totals, including the single ambient evaluation of f at x0
    // that seeds the first line search.
    EvalCounters totals;

    int iterations() const { return records.empty() ? 0 : records.back().iter; }
};

// Direction solve in the operator's basis: p = B y where op.matrix y = -B^T g.
// Postconditions (guaranteed by the clamped spectrum, rechecked defensively):
// residual <= 1e-9 max(1, ||g||) and <g, p> <= -nu ||p||^2.
TangentVector newton_direction(const Manifold& m, const NewtonOperator& op,
                               const TangentVector& grad);

// delta(nu, tau, L) = min(1, 2 nu (1 - tau) / L): every step size at or below
// this threshold passes the ambient-step surrogate test when the model
// spectrum is bounded below by nu and the ambient gradient is L-Lipschitz.
double theoretical_delta(double nu, double tau, double lipschitz);

// Backtracking descent until ||grad|| <= tol_grad or max_iter steps.
SolverTrace run(const Manifold& m, const Objective& f, const ManifoldPoint& x0,
                const SolverConfig& config);

// Convenience wrapper: config with direction = Steepest.
SolverTrace run_steepest(const Manifold& m, const Objective& f, const ManifoldPoint& x0,
                         SolverConfig config);

}  // namespace riemopt
