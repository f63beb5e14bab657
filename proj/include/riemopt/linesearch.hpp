#pragma once

#include <stdexcept>

#include "riemopt/manifolds.hpp"
#include "riemopt/objectives.hpp"

namespace riemopt {

struct LineSearchParams {
    double beta = 0.5;  // backtracking factor, in (0, 1)
    double tau = 0.1;   // sufficient-decrease factor, in (0, 1)
    int ell_max = 60;   // largest backtracking exponent tried
};

// Work counters. Totals are exact: every objective evaluation, retraction,
// gradient evaluation, and model assembly increments exactly one field at
// its call site.
struct EvalCounters {
    long long ambient_f_evals = 0;    // f at x + alpha p, no retraction
    long long retraction_evals = 0;   // retraction computations
    long long retracted_f_evals = 0;  // f at retracted trial points
    long long gradient_evals = 0;
    long long hessian_builds = 0;

    EvalCounters& operator+=(const EvalCounters& o) {
        ambient_f_evals += o.ambient_f_evals;
        retraction_evals += o.retraction_evals;
        retracted_f_evals += o.retracted_f_evals;
        gradient_evals += o.gradient_evals;
        hessian_builds += o.hessian_builds;
        return *this;
    }
    friend bool operator==(const EvalCounters&, const EvalCounters&) = default;
};

struct LineSearchResult {
    double alpha = 0.0;  // accepted step, beta^ell
    int ell = 0;         // accepted backtracking exponent
    ManifoldPoint next_point;
    double f_next = 0.0;  // objective at next_point, already paid for
    EvalCounters counters;
};

// Raised when no exponent up to ell_max satisfies the acceptance test.
// Work done before the failure is preserved in `counters`.
class LineSearchFailure : public std::runtime_error {
public:
    LineSearchFailure(const std::string& what, EvalCounters c)
        : std::runtime_error(what), counters(c) {}
    EvalCounters counters;
};

// Classical backtracking: accept the first ell with
//   f(retract(x, beta^ell p)) <= f(x) + tau beta^ell <grad, p>.
// Every trial costs one retraction and one objective evaluation.
// Preconditions: f_x = f(x); p, grad tangent at x; <grad, p> < 0.
LineSearchResult armijo_standard(const Manifold& m, const Objective& f, const ManifoldPoint& x,
                                 double f_x, const TangentVector& p, const TangentVector& grad,
                                 const LineSearchParams& params);

// Two-stage variant: each trial first tests the ambient-step surrogate
//   f(x + beta^ell p) <= f(x) + tau beta^ell <grad, p>,
// which needs no retraction. Only when that holds is the retracted point
// computed and the same bound checked there; acceptance requires both. A
// trial whose surrogate passes but whose retracted test fails moves on to
// ell + 1 like any rejection.
LineSearchResult armijo_modified(const Manifold& m, const Objective& f, const ManifoldPoint& x,
                                 double f_x, const TangentVector& p, const TangentVector& grad,
                                 const LineSearchParams& params);

// |f(x + alpha p) - f(retract(x, alpha p))| / alpha: the per-unit-step gap
// between the ambient step and the retracted step. Vanishes as alpha -> 0
// faster than alpha itself, and is identically zero in flat space.
double approx_error_ratio(const Manifold& m, const Objective& f, const ManifoldPoint& x,
                          const TangentVector& p, double alpha);

}  // namespace riemopt
