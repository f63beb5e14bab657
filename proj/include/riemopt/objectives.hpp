#pragma once

#include <functional>
#include <optional>
#include <string>

#include "riemopt/linalg.hpp"
#include "riemopt/manifolds.hpp"

namespace riemopt {

// A smooth function on ambient coordinates, differentiated in the embedding
// space. Callables may be swapped for instrumented wrappers in tests.
struct Objective {
    std::function<double(const linalg::Vector&)> eval;
    std::function<linalg::Vector(const linalg::Vector&)> euclid_grad;
    std::function<linalg::Vector(const linalg::Vector&, const linalg::Vector&)> euclid_hess_vec;
    std::optional<double> lipschitz_bound;  // gradient Lipschitz constant, when known
    std::string name;
};

// Second-order model at a point: an orthonormal tangent basis and the
// symmetric model matrix in that basis, eigenvalue-clamped into [nu, rho].
struct NewtonOperator {
    linalg::Matrix basis;   // ambient_dim x intrinsic_dim
    linalg::Matrix matrix;  // intrinsic_dim x intrinsic_dim
    double nu = 0.0;
    double rho = 0.0;
};

// Projection of the ambient gradient onto the tangent space at x. For any
// tangent p, <result, p> equals the ambient <euclid_grad(x), p>.
TangentVector riemannian_gradient(const Manifold& m, const Objective& f, const ManifoldPoint& x);

// Assembles the tangent-basis Hessian model: B^T (hess_vec + curvature) B,
// symmetrized, then eigenvalue-clamped into [nu, rho] so the operator is
// uniformly positive definite with a uniform upper bound.
NewtonOperator build_newton_operator(const Manifold& m, const Objective& f,
                                     const ManifoldPoint& x, double nu, double rho);

Objective make_rayleigh_sphere(const linalg::Matrix& a);
Objective make_brockett_stiefel(const linalg::Matrix& a, const linalg::Vector& weights);
Objective make_quadratic_euclidean(const linalg::Vector& d);

}  // namespace riemopt
