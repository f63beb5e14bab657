#pragma once

#include <string>

#include "riemopt/linalg.hpp"
#include "riemopt/rng.hpp"

namespace riemopt {

enum class ManifoldKind { Euclidean, Sphere, Stiefel };

class Manifold;

// A validated point. Instances only come from Manifold factories, which keeps
// the feasibility invariant (residual <= 1e-10) true by construction.
class ManifoldPoint {
public:
    const linalg::Vector& coords() const noexcept { return coords_; }

private:
    friend class Manifold;
    explicit ManifoldPoint(linalg::Vector coords) : coords_(std::move(coords)) {}
    linalg::Vector coords_;
};

// A validated tangent vector carrying a copy of its base point coordinates.
class TangentVector {
public:
    const linalg::Vector& coords() const noexcept { return coords_; }
    const linalg::Vector& base_coords() const noexcept { return base_; }

private:
    friend class Manifold;
    TangentVector(linalg::Vector base, linalg::Vector coords)
        : base_(std::move(base)), coords_(std::move(coords)) {}
    linalg::Vector base_;
    linalg::Vector coords_;
};

// Three embedded manifolds behind one value type. All coordinates are
// ambient: sphere points are unit vectors in R^n, Stiefel points are n x p
// matrices with orthonormal columns flattened row-major.
class Manifold {
public:
    static constexpr double kFeasibilityTol = 1e-10;

    static Manifold euclidean(int n);
    static Manifold sphere(int n);          // n >= 2
    static Manifold stiefel(int n, int p);  // n >= p >= 1

    ManifoldKind kind() const noexcept { return kind_; }
    int ambient_dim() const noexcept { return ambient_; }
    int intrinsic_dim() const noexcept { return intrinsic_; }
    int rows() const noexcept { return n_; }
    int cols() const noexcept { return p_; }
    std::string name() const;

    friend bool operator==(const Manifold& a, const Manifold& b) {
        return a.kind_ == b.kind_ && a.n_ == b.n_ && a.p_ == b.p_;
    }

    // Feasibility residual of raw coordinates: 0 for Euclidean,
    // | ||x|| - 1 | for the sphere, max_abs(X^T X - I) for Stiefel.
    double point_residual(const linalg::Vector& coords) const;

    // Tangency residual relative to max(1, max_abs(v)): 0 for Euclidean,
    // |<x, v>| for the sphere, max_abs(X^T V + V^T X) for Stiefel.
    double tangent_residual(const ManifoldPoint& x, const linalg::Vector& v) const;

    bool check_point(const linalg::Vector& coords, double tol = kFeasibilityTol) const;
    bool check_tangent(const ManifoldPoint& x, const linalg::Vector& v,
                       double tol = kFeasibilityTol) const;

    // Validating factories; infeasible input raises UsageError.
    ManifoldPoint make_point(linalg::Vector coords) const;
    TangentVector make_tangent(const ManifoldPoint& x, linalg::Vector coords) const;

    ManifoldPoint random_point(Rng& rng) const;

    // Orthogonal projection of an ambient vector onto the tangent space at x.
    TangentVector project_tangent(const ManifoldPoint& x, const linalg::Vector& ambient) const;

    // Retraction: identity-plus for Euclidean, normalization for the sphere,
    // QR (positive-diagonal thin factor) for Stiefel.
    ManifoldPoint retract(const ManifoldPoint& x, const TangentVector& v) const;

    // Raw ambient step x + alpha * p; never projects or validates.
    linalg::Vector ambient_move(const ManifoldPoint& x, const TangentVector& p,
                                double alpha) const;

    // Orthonormal tangent basis (ambient_dim x intrinsic_dim), deterministic
    // per (manifold, point): thin QR of the tangent projector applied to a
    // fixed seeded probe matrix, re-seeded on rank failure. Euclidean short-
    // circuits to the identity.
    linalg::Matrix tangent_basis(const ManifoldPoint& x) const;

    // Second-order correction accounting for how the tangent projector turns
    // with x: the term added to the projected ambient Hessian so the model
    // differentiates the gradient field on the manifold rather than in the
    // ambient space. Zero for Euclidean.
    linalg::Vector curvature_term(const ManifoldPoint& x, const linalg::Vector& tangent,
                                  const linalg::Vector& euclid_grad) const;

private:
    Manifold(ManifoldKind kind, int n, int p);

    linalg::Vector project_coords(const linalg::Vector& x, const linalg::Vector& u) const;

    ManifoldKind kind_;
    int n_ = 0;
    int p_ = 0;
    int ambient_ = 0;
    int intrinsic_ = 0;
};

}  // namespace riemopt
