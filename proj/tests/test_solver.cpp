#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riemopt/solver.hpp"
#include "riemopt/rng.hpp"

using riemopt::build_newton_operator;
using riemopt::DirectionKind;
using riemopt::LineSearchKind;
using riemopt::LineSearchParams;
using riemopt::make_brockett_stiefel;
using riemopt::make_quadratic_euclidean;
using riemopt::make_rayleigh_sphere;
using riemopt::Manifold;
using riemopt::ManifoldPoint;
using riemopt::newton_direction;
using riemopt::NewtonOperator;
using riemopt::Objective;
using riemopt::riemannian_gradient;
using riemopt::Rng;
using riemopt::run;
using riemopt::run_steepest;
using riemopt::SolveStatus;
using riemopt::SolverConfig;
using riemopt::SolverTrace;
using riemopt::TangentVector;
using riemopt::theoretical_delta;
using riemopt::UsageError;
using namespace riemopt::linalg;

TEST_CASE("theoretical_delta closed form and validation") {
    CHECK(theoretical_delta(1.0, 0.5, 1.0) == 1.0);
    CHECK(theoretical_delta(1.0, 0.5, 100.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(theoretical_delta(2.0, 0.25, 3.0) == 1.0);  // capped at 1
    CHECK_THROWS_AS(theoretical_delta(0.0, 0.5, 1.0), UsageError);
    CHECK_THROWS_AS(theoretical_delta(1.0, 1.0, 1.0), UsageError);
    CHECK_THROWS_AS(theoretical_delta(1.0, 0.5, 0.0), UsageError);
}

TEST_CASE("newton_direction solves the model system exactly on a diagonal case") {
    // Power-of-two diagonal keeps the Cholesky solve exact.
    Manifold e = Manifold::euclidean(2);
    Objective f = make_quadratic_euclidean({1.0, 4.0});
    ManifoldPoint x = e.make_point({1.0, 1.0});
    NewtonOperator op = build_newton_operator(e, f, x, 1e-3, 1e6);
    TangentVector grad = riemannian_gradient(e, f, x);
    TangentVector p = newton_direction(e, op, grad);
    CHECK(p.coords()[0] == -1.0);
    CHECK(p.coords()[1] == -1.0);
}

TEST_CASE("newton_direction postconditions on random sphere instances") {
    Rng rng(44);
    Manifold s = Manifold::sphere(8);
    Matrix a = riemopt::random_symmetric(rng, 8);
    Objective f = make_rayleigh_sphere(a);
    const double nu = 1e-3, rho = 1e6;
    for (int trial = 0; trial < 10; ++trial) {
        ManifoldPoint x = s.random_point(rng);
        NewtonOperator op = build_newton_operator(s, f, x, nu, rho);
        TangentVector grad = riemannian_gradient(s, f, x);
        TangentVector p = newton_direction(s, op, grad);

        CHECK(s.tangent_residual(x, p.coords()) <= 1e-10);
        const double slope = inner(grad.coords(), p.coords());
        const double pn = norm(p.coords());
        const double gn = norm(grad.coords());
        CHECK(slope <= -nu * pn * pn + 1e-12 * std::max(1.0, gn));
        CHECK(pn <= gn / nu * (1.0 + 1e-12));
        CHECK(gn <= rho * pn + 1e-9);
    }
}

TEST_CASE("one newton step solves a separable quadratic, with exact bookkeeping") {
    // Diagonal (1, 4) keeps every Cholesky operation on powers of two, so the
    // computed direction is exactly -x0, the trial lands exactly on the
    // minimizer, and the value 0 ties the bound 2.5 - 0.5 * 5; ties accept.
    Manifold e = Manifold::euclidean(2);
    Objective f = make_quadratic_euclidean({1.0, 4.0});
    ManifoldPoint x0 = e.make_point({1.0, 1.0});

    SolverConfig config;
    config.params.tau = 0.5;
    SolverTrace trace = run(e, f, x0, config);

    CHECK(trace.status == SolveStatus::Converged);
    CHECK(trace.iterations() == 1);
    CHECK(trace.f_final == 0.0);
    CHECK(trace.final_point.coords()[0] == 0.0);
    CHECK(trace.final_point.coords()[1] == 0.0);

    REQUIRE(trace.records.size() == 2);
    CHECK(trace.records[0].iter == 0);
    CHECK(trace.records[0].f == 2.5);
    CHECK(trace.records[0].ell == 0);
    CHECK(trace.records[0].step_alpha == 1.0);
    CHECK(trace.records[0].slope == -5.0);
    CHECK(trace.records[1].ell == -1);
    CHECK(trace.records[1].step_alpha == 0.0);
    CHECK(trace.records[1].grad_norm == 0.0);

    // Totals: seed eval at x0, one surrogate probe, one retracted pair,
    // gradients at both iterates plus one inside the model build.
    CHECK(trace.totals.ambient_f_evals == 2);
    CHECK(trace.totals.retraction_evals == 1);
    CHECK(trace.totals.retracted_f_evals == 1);
    CHECK(trace.totals.gradient_evals == 3);
    CHECK(trace.totals.hessian_builds == 1);
}

TEST_CASE("flat space: standard and modified runs are identical, trial for trial") {
    Rng rng(52);
    Manifold e = Manifold::euclidean(5);
    Vector d(5);
    for (double& v : d) v = 1.0 + 99.0 * rng.unit();
    Objective f = make_quadratic_euclidean(d);
    ManifoldPoint x0 = e.random_point(rng);

    SolverConfig config;
    config.params.tau = 0.9;  // force some backtracking
    config.linesearch = LineSearchKind::Standard;
    SolverTrace std_t = run(e, f, x0, config);
    config.linesearch = LineSearchKind::Modified;
    SolverTrace mod_t = run(e, f, x0, config);

    CHECK(std_t.status == SolveStatus::Converged);
    CHECK(mod_t.status == SolveStatus::Converged);
    REQUIRE(std_t.records.size() == mod_t.records.size());
    for (std::size_t k = 0; k < std_t.records.size(); ++k) {
        CHECK(std_t.records[k].f == mod_t.records[k].f);  // bitwise equal path
        CHECK(std_t.records[k].ell == mod_t.records[k].ell);
        CHECK(std_t.records[k].step_alpha == mod_t.records[k].step_alpha);
        CHECK(std_t.records[k].counters.retracted_f_evals ==
              mod_t.records[k].counters.ambient_f_evals);
    }
    for (int i = 0; i < 5; ++i) {
        CHECK(std_t.final_point.coords()[i] == mod_t.final_point.coords()[i]);
    }
}

TEST_CASE("newton with the two-stage search minimizes a rayleigh quotient") {
    Rng rng(4);
    const int n = 9;
    Matrix a = riemopt::random_symmetric(rng, n);
    Objective f = make_rayleigh_sphere(a);
    Manifold s = Manifold::sphere(n);
    ManifoldPoint x0 = s.random_point(rng);

    SolverConfig config;  // defaults: newton + modified, tol 1e-8
    SolverTrace trace = run(s, f, x0, config);

    CHECK(trace.status == SolveStatus::Converged);
    CHECK(trace.grad_norm_final <= 1e-8);
    CHECK(s.point_residual(trace.final_point.coords()) <= 1e-10);

    const double lambda_min = sym_eig(a).values.front();
    CHECK(std::abs(trace.f_final - lambda_min) <= 1e-8);

    // Strict descent at every accepted step.
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
        CHECK(trace.records[k].f < trace.records[k - 1].f);
    }
    // Norm relations implied by the clamped model spectrum.
    for (const auto& rec : trace.records) {
        if (rec.ell < 0) continue;
        CHECK(rec.direction_norm <= rec.grad_norm / config.nu * (1.0 + 1e-12));
        CHECK(rec.grad_norm <= config.rho * rec.direction_norm + 1e-9);
    }
}

TEST_CASE("steepest descent reaches the same minimum, no faster") {
    Rng rng(4);
    const int n = 9;
    Matrix a = riemopt::random_symmetric(rng, n);
    Objective f = make_rayleigh_sphere(a);
    Manifold s = Manifold::sphere(n);
    ManifoldPoint x0 = s.random_point(rng);

    SolverConfig config;
    SolverTrace newton_t = run(s, f, x0, config);
    // A first-order method at tol 1e-8 would need per-step decreases around
    // tau * alpha * |g|^2 ~ 1e-17, below double resolution at |f| ~ 1. Use a
    // tolerance whose required decreases stay well above one ulp.
    config.tol_grad = 1e-6;
    config.max_iter = 20000;
    SolverTrace steep_t = run_steepest(s, f, x0, config);

    CHECK(steep_t.status == SolveStatus::Converged);
    CHECK(std::abs(steep_t.f_final - newton_t.f_final) <= 1e-7);
    CHECK(steep_t.iterations() >= newton_t.iterations());
    CHECK(steep_t.totals.hessian_builds == 0);
}

TEST_CASE("newton minimizes a brockett trace objective on stiefel") {
    Rng rng(9);
    const int n = 5, p = 2;
    Matrix a = riemopt::random_symmetric(rng, n);
    Objective f = make_brockett_stiefel(a, {1.0, 2.0});
    Manifold st = Manifold::stiefel(n, p);
    ManifoldPoint x0 = st.random_point(rng);

    SolverConfig config;
    SolverTrace trace = run(st, f, x0, config);

    CHECK(trace.status == SolveStatus::Converged);
    CHECK(st.point_residual(trace.final_point.coords()) <= 1e-10);

    // Optimal value pairs the largest weight with the smallest eigenvalue.
    EigResult eig = sym_eig(a);
    const double f_star = 1.0 * eig.values[1] + 2.0 * eig.values[0];
    CHECK(std::abs(trace.f_final - f_star) <= 1e-8);
}

TEST_CASE("max_iter status with an unreachable tolerance") {
    Rng rng(15);
    Manifold s = Manifold::sphere(5);
    Matrix a = riemopt::random_symmetric(rng, 5);
    Objective f = make_rayleigh_sphere(a);
    ManifoldPoint x0 = s.random_point(rng);

    SolverConfig config;
    config.tol_grad = 1e-300;
    config.max_iter = 3;
    SolverTrace trace = run(s, f, x0, config);
    CHECK(trace.status == SolveStatus::MaxIter);
    CHECK(trace.iterations() == 3);
    REQUIRE(trace.records.size() == 4);
    CHECK(trace.records.back().ell == -1);
}

TEST_CASE("line-search failure surfaces in the trace") {
    // A fabricated gradient points along a direction where the value jumps
    // up, so no trial at any level can beat the bound, not even after the
    // bound rounds back to f(x) at tiny steps.
    Manifold e = Manifold::euclidean(2);
    Objective f;
    f.name = "uphill-jump";
    f.eval = [](const Vector& x) { return x[0] > 0.0 ? 1.5 : 1.0; };
    f.euclid_grad = [](const Vector& x) { return Vector(x.size(), -1.0); };
    f.euclid_hess_vec = [](const Vector&, const Vector& u) { return Vector(u.size(), 0.0); };
    ManifoldPoint x0 = e.make_point({0.0, 0.0});

    SolverConfig config;
    config.direction = DirectionKind::Steepest;
    SolverTrace trace = run(e, f, x0, config);
    CHECK(trace.status == SolveStatus::LineSearchFailed);
    CHECK(trace.records.back().ell == -1);
    CHECK(trace.totals.ambient_f_evals == 1 + 61);  // seed + full sweep
}

TEST_CASE("surrogate acceptance below the guaranteed threshold") {
    // With the model spectrum bounded below by nu_eff and an L-Lipschitz
    // ambient gradient, every step size at or below delta = 2 nu_eff (1-tau)/L
    // must pass the ambient surrogate test along the model direction.
    Rng rng(20);
    Manifold s = Manifold::sphere(6);
    Matrix a = riemopt::random_symmetric(rng, 6);
    Objective f = make_rayleigh_sphere(a);
    REQUIRE(f.lipschitz_bound.has_value());
    const double lipschitz = *f.lipschitz_bound;
    const double tau = 0.5, beta = 0.5;

    for (int trial = 0; trial < 20; ++trial) {
        ManifoldPoint x = s.random_point(rng);
        TangentVector grad = riemannian_gradient(s, f, x);
        if (norm(grad.coords()) <= 1e-12) continue;
        NewtonOperator op = build_newton_operator(s, f, x, 1e-3, 1e6);
        TangentVector p = newton_direction(s, op, grad);
        const double nu_eff = sym_eig(op.matrix).values.front();
        const double delta = theoretical_delta(nu_eff, tau, lipschitz);

        const double f_x = f.eval(x.coords());
        const double slope = inner(grad.coords(), p.coords());
        const double p_norm2 = inner(p.coords(), p.coords());
        double alpha = 1.0;
        for (int ell = 0; ell <= 60; ++ell) {
            // Guaranteed real-arithmetic margin at this step size; only
            // assert where it clears the rounding noise of evaluating f.
            const double margin =
                (1.0 - tau) * alpha * (-slope) - 0.5 * lipschitz * alpha * alpha * p_norm2;
            if (alpha <= delta && margin > 1e-13 * std::max(1.0, std::abs(f_x))) {
                const double f_ambient = f.eval(s.ambient_move(x, p, alpha));
                CHECK(f_ambient <= f_x + tau * alpha * slope);
            }
            alpha *= beta;
        }
    }
}

TEST_CASE("solver config validation") {
    Manifold e = Manifold::euclidean(2);
    Objective f = make_quadratic_euclidean({1.0, 2.0});
    ManifoldPoint x0 = e.make_point({1.0, 1.0});
    SolverConfig config;
    config.tol_grad = 0.0;
    CHECK_THROWS_AS(run(e, f, x0, config), UsageError);
    config = SolverConfig{};
    config.max_iter = -1;
    CHECK_THROWS_AS(run(e, f, x0, config), UsageError);
    config = SolverConfig{};
    config.nu = 0.0;
    CHECK_THROWS_AS(run(e, f, x0, config), UsageError);
    config = SolverConfig{};
    config.rho = config.nu / 2.0;
    CHECK_THROWS_AS(run(e, f, x0, config), UsageError);
}

TEST_CASE("enum names used in reports") {
    CHECK(riemopt::to_string(SolveStatus::Converged) == "converged");
    CHECK(riemopt::to_string(SolveStatus::MaxIter) == "max_iter");
    CHECK(riemopt::to_string(SolveStatus::LineSearchFailed) == "linesearch_failed");
    CHECK(riemopt::to_string(LineSearchKind::Standard) == "standard");
    CHECK(riemopt::to_string(LineSearchKind::Modified) == "modified");
    CHECK(riemopt::to_string(DirectionKind::Newton) == "newton");
    CHECK(riemopt::to_string(DirectionKind::Steepest) == "steepest");
}
