#include "riemopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace riemopt {

using linalg::Matrix;
using linalg::Vector;

TangentVector riemannian_gradient(const Manifold& m, const Objective& f,
                                  const ManifoldPoint& x) {
    return m.project_tangent(x, f.euclid_grad(x.coords()));
}

NewtonOperator build_newton_operator(const Manifold& m, const Objective& f,
                                     const ManifoldPoint& x, double nu, double rho) {
    if (!(nu > 0.0) || !(rho >= nu)) {
        throw UsageError("build_newton_operator: need 0 < nu <= rho");
    }

    NewtonOperator op;
    op.basis = m.tangent_basis(x);
    op.nu = nu;
    op.rho = rho;
    const int d = op.basis.cols();
    if (d == 0) {
        op.matrix = Matrix(0, 0);
        return op;
    }

    const Vector egrad = f.euclid_grad(x.coords());
    const int ambient = m.ambient_dim();

    Matrix model(d, d);
    Vector column(ambient);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < ambient; ++i) column[i] = op.basis(i, j);
        Vector w = f.euclid_hess_vec(x.coords(), column);
        const Vector correction = m.curvature_term(x, column, egrad);
        for (int i = 0; i < ambient; ++i) w[i] += correction[i];
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int k = 0; k < ambient; ++k) acc += op.basis(k, i) * w[k];
            model(i, j) = acc;
        }
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const double s = 0.5 * (model(i, j) + model(j, i));
            model(i, j) = s;
            model(j, i) = s;
        }
    }

    linalg::EigResult eig = linalg::sym_eig(model);
    bool clamped = false;
    for (double& lambda : eig.values) {
        if (lambda < nu) {
            lambda = nu;
            clamped = true;
        } else if (lambda > rho) {
            lambda = rho;
            clamped = true;
        }
    }
    if (!clamped) {
        op.matrix = std::move(model);
        return op;
    }

    Matrix rebuilt(d, d, 0.0);
    for (int k = 0; k < d; ++k) {
        const double lambda = eig.values[k];
        for (int i = 0; i < d; ++i) {
            const double scaled_ik = lambda * eig.vectors(i, k);
            for (int j = i; j < d; ++j) rebuilt(i, j) += scaled_ik * eig.vectors(j, k);
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) rebuilt(j, i) = rebuilt(i, j);
    op.matrix = std::move(rebuilt);
    return op;
}

Objective make_rayleigh_sphere(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw UsageError("make_rayleigh_sphere: matrix must be square");
    }
    const int n = a.rows();
    const double sym_tol = 1e-10 * std::max(1.0, linalg::max_abs(a));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > sym_tol) {
                throw UsageError("make_rayleigh_sphere: matrix must be symmetric");
            }

    auto mat = std::make_shared<Matrix>(a);
    Objective f;
    f.name = "rayleigh";
    // Term-by-term compensated quadratic form: near a minimizer the Armijo
    // tests compare values whose true differences sit below one ulp of f, so
    // the evaluation must not add accumulation noise of its own.
    f.eval = [mat, n](const Vector& x) {
        linalg::CompensatedSum acc;
        for (int r = 0; r < n; ++r) {
            const double xr = x[r];
            for (int c = 0; c < n; ++c) {
                const double p1 = (*mat)(r, c) * x[c];
                const double e1 = std::fma((*mat)(r, c), x[c], -p1);
                acc.add_product(p1, xr);
                acc.add(e1 * xr);
            }
        }
        return acc.value();
    };
    f.euclid_grad = [mat](const Vector& x) { return linalg::scaled(linalg::matvec(*mat, x), 2.0); };
    f.euclid_hess_vec = [mat](const Vector&, const Vector& u) {
        return linalg::scaled(linalg::matvec(*mat, u), 2.0);
    };
    // ||grad f(x) - grad f(y)|| = 2 ||A (x - y)|| <= 2 max|lambda| ||x - y||
    linalg::EigResult eig = linalg::sym_eig(a);
    f.lipschitz_bound =
        2.0 * std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    return f;
}

Objective make_brockett_stiefel(const Matrix& a, const Vector& weights) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw UsageError("make_brockett_stiefel: matrix must be square");
    }
    const int n = a.rows();
    const int p = static_cast<int>(weights.size());
    if (p < 1 || p > n) throw UsageError("make_brockett_stiefel: need 1 <= #weights <= n");
    for (int j = 0; j < p; ++j) {
        if (!(weights[j] > 0.0)) {
            throw UsageError("make_brockett_stiefel: weights must be positive");
        }
        if (j > 0 && !(weights[j] > weights[j - 1])) {
            throw UsageError("make_brockett_stiefel: weights must be strictly increasing");
        }
    }
    const double sym_tol = 1e-10 * std::max(1.0, linalg::max_abs(a));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > sym_tol) {
                throw UsageError("make_brockett_stiefel: matrix must be symmetric");
            }

    auto mat = std::make_shared<Matrix>(a);
    auto w = std::make_shared<Vector>(weights);

    // f(X) = sum_j w_j * x_j^T A x_j over columns x_j; grad = 2 A X N.
    auto grad_impl = [mat, w, n, p](const Vector& flat) {
        Vector out(static_cast<std::size_t>(n) * p, 0.0);
        Vector column(n), ac(n);
        for (int j = 0; j < p; ++j) {
            for (int i = 0; i < n; ++i) column[i] = flat[static_cast<std::size_t>(i) * p + j];
            ac = linalg::matvec(*mat, column);
            const double scale = 2.0 * (*w)[j];
            for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i) * p + j] = scale * ac[i];
        }
        return out;
    };

    Objective f;
    f.name = "brockett";
    // Compensated sum over all w_j * a_rc * x_cj * x_rj terms; the e1*m + p1*em
    // cross terms carry the product-split residuals so the total is accurate to
    // O(eps^2). See the rayleigh evaluation for why this matters.
    f.eval = [mat, w, n, p](const Vector& flat) {
        linalg::CompensatedSum acc;
        for (int j = 0; j < p; ++j) {
            const double wj = (*w)[j];
            for (int r = 0; r < n; ++r) {
                const double xr = flat[static_cast<std::size_t>(r) * p + j];
                const double m = wj * xr;
                const double em = std::fma(wj, xr, -m);
                for (int c = 0; c < n; ++c) {
                    const double xc = flat[static_cast<std::size_t>(c) * p + j];
                    const double p1 = (*mat)(r, c) * xc;
                    const double e1 = std::fma((*mat)(r, c), xc, -p1);
                    acc.add_product(p1, m);
                    acc.add(e1 * m + p1 * em);
                }
            }
        }
        return acc.value();
    };
    f.euclid_grad = grad_impl;
    f.euclid_hess_vec = [grad_impl](const Vector&, const Vector& u) { return grad_impl(u); };
    linalg::EigResult eig = linalg::sym_eig(a);
    f.lipschitz_bound = 2.0 * weights.back() *
                        std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    return f;
}

Objective make_quadratic_euclidean(const Vector& d) {
    if (d.empty()) throw UsageError("make_quadratic_euclidean: empty diagonal");
    for (double v : d) {
        if (!(v > 0.0)) throw UsageError("make_quadratic_euclidean: diagonal must be positive");
    }
    auto diag = std::make_shared<Vector>(d);
    Objective f;
    f.name = "quadratic";
    f.eval = [diag](const Vector& x) {
        linalg::CompensatedSum acc;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double sq = x[i] * x[i];
            const double esq = std::fma(x[i], x[i], -sq);
            acc.add_product((*diag)[i], sq);
            acc.add((*diag)[i] * esq);
        }
        return 0.5 * acc.value();
    };
    f.euclid_grad = [diag](const Vector& x) {
        Vector out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = (*diag)[i] * x[i];
        return out;
    };
    f.euclid_hess_vec = [diag](const Vector&, const Vector& u) {
        Vector out(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = (*diag)[i] * u[i];
        return out;
    };
    f.lipschitz_bound = *std::max_element(d.begin(), d.end());
    return f;
}

}  // namespace riemopt
