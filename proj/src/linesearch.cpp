#include "riemopt/linesearch.hpp"

#include <cmath>
#include <string>

namespace riemopt {

using linalg::Vector;

namespace {

void validate_common(const ManifoldPoint& x, const TangentVector& p, const TangentVector& grad,
                     const LineSearchParams& params, double f_x, double slope) {
    if (!(params.beta > 0.0 && params.beta < 1.0)) {
        throw UsageError("line search: beta must lie in (0, 1)");
    }
    if (!(params.tau > 0.0 && params.tau < 1.0)) {
        throw UsageError("line search: tau must lie in (0, 1)");
    }
    if (params.ell_max < 0) throw UsageError("line search: ell_max must be >= 0");
    if (p.base_coords() != x.coords() || grad.base_coords() != x.coords()) {
        throw UsageError("line search: direction or gradient based at a different point");
    }
    if (!std::isfinite(f_x)) throw UsageError("line search: f_x is not finite");
    if (!(slope < 0.0)) {
        throw UsageError("line search: direction is not a descent direction");
    }
}

TangentVector scaled_direction(const Manifold& m, const ManifoldPoint& x,
                               const TangentVector& p, double alpha) {
    // Coordinate-wise scaling leaves the relative tangency residual no worse
    // than p's, so validation cannot fire here.
    return m.make_tangent(x, linalg::scaled(p.coords(), alpha));
}

}  // namespace

LineSearchResult armijo_standard(const Manifold& m, const Objective& f, const ManifoldPoint& x,
                                 double f_x, const TangentVector& p, const TangentVector& grad,
                                 const LineSearchParams& params) {
    const double slope = linalg::inner(grad.coords(), p.coords());
    validate_common(x, p, grad, params, f_x, slope);

    EvalCounters counters;
    double alpha = 1.0;
    for (int ell = 0; ell <= params.ell_max; ++ell) {
        const double bound = f_x + params.tau * alpha * slope;
        ManifoldPoint trial = m.retract(x, scaled_direction(m, x, p, alpha));
        counters.retraction_evals += 1;
        const double f_trial = f.eval(trial.coords());
        counters.retracted_f_evals += 1;
        if (f_trial <= bound) {
            return {alpha, ell, std::move(trial), f_trial, counters};
        }
        alpha *= params.beta;
    }
    throw LineSearchFailure("armijo_standard: no acceptable step within ell_max", counters);
}

LineSearchResult armijo_modified(const Manifold& m, const Objective& f, const ManifoldPoint& x,
                                 double f_x, const TangentVector& p, const TangentVector& grad,
                                 const LineSearchParams& params) {
    const double slope = linalg::inner(grad.coords(), p.coords());
    validate_common(x, p, grad, params, f_x, slope);

    EvalCounters counters;
    double alpha = 1.0;
    for (int ell = 0; ell <= params.ell_max; ++ell) {
        const double bound = f_x + params.tau * alpha * slope;
        const double f_ambient = f.eval(m.ambient_move(x, p, alpha));
        counters.ambient_f_evals += 1;
        if (f_ambient <= bound) {
            ManifoldPoint trial = m.retract(x, scaled_direction(m, x, p, alpha));
            counters.retraction_evals += 1;
            const double f_trial = f.eval(trial.coords());
            counters.retracted_f_evals += 1;
            if (f_trial <= bound) {
                return {alpha, ell, std::move(trial), f_trial, counters};
            }
        }
        alpha *= params.beta;
    }
    throw LineSearchFailure("armijo_modified: no acceptable step within ell_max", counters);
}

double approx_error_ratio(const Manifold& m, const Objective& f, const ManifoldPoint& x,
                          const TangentVector& p, double alpha) {
    if (!(alpha > 0.0)) throw UsageError("approx_error_ratio: alpha must be positive");
    const double f_ambient = f.eval(m.ambient_move(x, p, alpha));
    const double f_retracted =
        f.eval(m.retract(x, m.make_tangent(x, linalg::scaled(p.coords(), alpha))).coords());
    return std::abs(f_ambient - f_retracted) / alpha;
}

}  // namespace riemopt
