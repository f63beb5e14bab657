#include "riemopt/solver.hpp"

#include <cmath>
#include <utility>

namespace riemopt {

using linalg::Vector;

std::string to_string(LineSearchKind k) {
    return k == LineSearchKind::Standard ? "standard" : "modified";
}

std::string to_string(DirectionKind k) {
    return k == DirectionKind::Newton ? "newton" : "steepest";
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged:
            return "converged";
        case SolveStatus::MaxIter:
            return "max_iter";
        case SolveStatus::LineSearchFailed:
            return "linesearch_failed";
    }
    return "?";
}

TangentVector newton_direction(const Manifold& m, const NewtonOperator& op,
                               const TangentVector& grad) {
    const int d = op.basis.cols();
    if (d == 0) {
        return m.project_tangent(m.make_point(grad.base_coords()), Vector(m.ambient_dim(), 0.0));
    }
    const Vector c = linalg::tmatvec(op.basis, grad.coords());
    const Vector y = linalg::solve_spd(op.matrix, linalg::scaled(c, -1.0));
    Vector p_coords = linalg::matvec(op.basis, y);

    const double grad_norm = linalg::norm(grad.coords());
    Vector residual = linalg::axpy(1.0, c, linalg::matvec(op.matrix, y));
    if (linalg::norm(residual) > 1e-9 * std::max(1.0, grad_norm)) {
        throw DegenerateInputError("newton_direction: solve residual out of tolerance");
    }

    ManifoldPoint x = m.make_point(grad.base_coords());
    TangentVector p = m.project_tangent(x, p_coords);
    const double slope = linalg::inner(grad.coords(), p.coords());
    const double p_norm2 = linalg::inner(p.coords(), p.coords());
    // When the gradient lies in clamped eigendirections the bound is an exact
    // equality, so the slack must scale with the quantities compared.
    const double slack = 1e-9 * (std::abs(slope) + op.nu * p_norm2) + 1e-300;
    if (p_norm2 > 0.0 && !(slope <= -op.nu * p_norm2 + slack)) {
        throw DegenerateInputError("newton_direction: descent bound violated");
    }
    return p;
}

double theoretical_delta(double nu, double tau, double lipschitz) {
    if (!(nu > 0.0)) throw UsageError("theoretical_delta: nu must be positive");
    if (!(tau > 0.0 && tau < 1.0)) throw UsageError("theoretical_delta: tau must lie in (0, 1)");
    if (!(lipschitz > 0.0)) throw UsageError("theoretical_delta: lipschitz must be positive");
    return std::min(1.0, 2.0 * nu * (1.0 - tau) / lipschitz);
}

SolverTrace run(const Manifold& m, const Objective& f, const ManifoldPoint& x0,
                const SolverConfig& config) {
    if (!(config.tol_grad > 0.0)) throw UsageError("run: tol_grad must be positive");
    if (config.max_iter < 0) throw UsageError("run: max_iter must be >= 0");
    if (config.direction == DirectionKind::Newton && (!(config.nu > 0.0) || !(config.rho >= config.nu))) {
        throw UsageError("run: need 0 < nu <= rho");
    }

    SolverTrace trace(x0);

    ManifoldPoint x = x0;
    double f_x = f.eval(x.coords());
    trace.totals.ambient_f_evals += 1;  // seed evaluation at x0

    for (int iter = 0;; ++iter) {
        TangentVector grad = riemannian_gradient(m, f, x);
        const double grad_norm = linalg::norm(grad.coords());

        IterationRecord record;
        record.iter = iter;
        record.f = f_x;
        record.grad_norm = grad_norm;
        record.counters.gradient_evals = 1;

        if (grad_norm <= config.tol_grad) {
            trace.totals += record.counters;
            trace.records.push_back(record);
            trace.status = SolveStatus::Converged;
            break;
        }
        if (iter >= config.max_iter) {
            trace.totals += record.counters;
            trace.records.push_back(record);
            trace.status = SolveStatus::MaxIter;
            break;
        }

        TangentVector p = grad;  // placeholder; replaced below
        if (config.direction == DirectionKind::Newton) {
            NewtonOperator op = build_newton_operator(m, f, x, config.nu, config.rho);
            record.counters.hessian_builds += 1;
            record.counters.gradient_evals += 1;  // model assembly re-evaluates the gradient
            p = newton_direction(m, op, grad);
        } else {
            p = m.make_tangent(x, linalg::scaled(grad.coords(), -1.0));
        }
        record.direction_norm = linalg::norm(p.coords());
        record.slope = linalg::inner(grad.coords(), p.coords());

        try {
            LineSearchResult step =
                (config.linesearch == LineSearchKind::Standard)
                    ? armijo_standard(m, f, x, f_x, p, grad, config.params)
                    : armijo_modified(m, f, x, f_x, p, grad, config.params);
            record.step_alpha = step.alpha;
            record.ell = step.ell;
            record.counters += step.counters;
            trace.totals += record.counters;
            trace.records.push_back(record);
            x = std::move(step.next_point);
            f_x = step.f_next;
        } catch (const LineSearchFailure& failure) {
            record.counters += failure.counters;
            trace.totals += record.counters;
            trace.records.push_back(record);
            trace.status = SolveStatus::LineSearchFailed;
            break;
        }
    }

    trace.final_point = std::move(x);
    trace.f_final = f_x;
    trace.grad_norm_final = trace.records.back().grad_norm;
    return trace;
}

SolverTrace run_steepest(const Manifold& m, const Objective& f, const ManifoldPoint& x0,
                         SolverConfig config) {
    config.direction = DirectionKind::Steepest;
    return run(m, f, x0, config);
}

}  // namespace riemopt
