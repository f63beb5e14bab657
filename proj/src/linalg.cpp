#include "riemopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace riemopt::linalg {

namespace {

void require_finite(const Vector& v, const char* who) {
    for (double x : v) {
        if (!std::isfinite(x)) throw UsageError(std::string(who) + ": non-finite entry");
    }
}

void require_finite(const Matrix& a, const char* who) { require_finite(a.data(), who); }

void require_symmetric(const Matrix& s, const char* who) {
    if (s.rows() != s.cols()) throw UsageError(std::string(who) + ": matrix not square");
    const double tol = 1e-10 * std::max(1.0, max_abs(s));
    for (int i = 0; i < s.rows(); ++i) {
        for (int j = i + 1; j < s.cols(); ++j) {
            if (std::abs(s(i, j) - s(j, i)) > tol) {
                throw UsageError(std::string(who) + ": matrix not symmetric");
            }
        }
    }
}

}  // namespace

double inner(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw UsageError("inner: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double norm(const Vector& x) { return std::sqrt(inner(x, x)); }

void CompensatedSum::add(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
        comp_ += (sum_ - t) + value;
    } else {
        comp_ += (value - t) + sum_;
    }
    sum_ = t;
}

void CompensatedSum::add_product(double a, double b) noexcept {
    const double p = a * b;
    add(p);
    add(std::fma(a, b, -p));  // exact residual of the rounded product
}

double max_abs(const Vector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const Matrix& a) { return max_abs(a.data()); }

Vector scaled(const Vector& x, double s) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
    return out;
}

Vector axpy(double alpha, const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw UsageError("axpy: dimension mismatch");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] + y[i];
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw UsageError("matmul: dimension mismatch");
    Matrix out(a.rows(), b.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != static_cast<int>(x.size())) throw UsageError("matvec: dimension mismatch");
    Vector out(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

Vector tmatvec(const Matrix& a, const Vector& x) {
    if (a.rows() != static_cast<int>(x.size())) throw UsageError("tmatvec: dimension mismatch");
    Vector out(a.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (int j = 0; j < a.cols(); ++j) out[j] += a(i, j) * xi;
    }
    return out;
}

QrResult thin_qr(const Matrix& a) {
    const int m = a.rows();
    const int p = a.cols();
    if (p == 0 || m < p) throw UsageError("thin_qr: need rows >= cols >= 1");
    require_finite(a, "thin_qr");

    const double rank_tol = 1e-14 * std::max(1.0, max_abs(a));

    Matrix work = a;
    // Reflector k lives in column k of v below row k; betas[k] scales it.
    Matrix v(m, p, 0.0);
    Vector betas(p, 0.0);

    for (int k = 0; k < p; ++k) {
        double normx = 0.0;
        for (int i = k; i < m; ++i) normx = std::hypot(normx, work(i, k));
        if (normx <= rank_tol) {
            throw DegenerateInputError("thin_qr: rank-deficient input");
        }
        const double x0 = work(k, k);
        const double alpha = (x0 >= 0.0) ? -normx : normx;
        double vnorm2 = 0.0;
        v(k, k) = x0 - alpha;
        vnorm2 += v(k, k) * v(k, k);
        for (int i = k + 1; i < m; ++i) {
            v(i, k) = work(i, k);
            vnorm2 += v(i, k) * v(i, k);
        }
        betas[k] = 2.0 / vnorm2;

        work(k, k) = alpha;
        for (int i = k + 1; i < m; ++i) work(i, k) = 0.0;
        for (int j = k + 1; j < p; ++j) {
            double dot = 0.0;
            for (int i = k; i < m; ++i) dot += v(i, k) * work(i, j);
            const double coef = betas[k] * dot;
            for (int i = k; i < m; ++i) work(i, j) -= coef * v(i, k);
        }
    }

    Matrix r(p, p, 0.0);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) r(i, j) = work(i, j);

    for (int k = 0; k < p; ++k) {
        if (std::abs(r(k, k)) <= rank_tol) {
            throw DegenerateInputError("thin_qr: rank-deficient input");
        }
    }

    // Q = H_0 ... H_{p-1} applied to the first p columns of the identity.
    Matrix q(m, p, 0.0);
    for (int j = 0; j < p; ++j) q(j, j) = 1.0;
    for (int k = p - 1; k >= 0; --k) {
        for (int j = 0; j < p; ++j) {
            double dot = 0.0;
            for (int i = k; i < m; ++i) dot += v(i, k) * q(i, j);
            const double coef = betas[k] * dot;
            for (int i = k; i < m; ++i) q(i, j) -= coef * v(i, k);
        }
    }

    // Normalize to a positive diagonal of R.
    for (int k = 0; k < p; ++k) {
        if (r(k, k) < 0.0) {
            for (int j = k; j < p; ++j) r(k, j) = -r(k, j);
            for (int i = 0; i < m; ++i) q(i, k) = -q(i, k);
        }
    }

    return {std::move(q), std::move(r)};
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form. On return
// `a` holds the accumulated orthogonal transform, `d` the diagonal, and `e`
// the subdiagonal in positions 1..n-1.
void tridiagonalize(Matrix& a, Vector& d, Vector& e) {
    const int n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }

    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
                for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

// Implicit-shift QL on a tridiagonal matrix, rotations accumulated into z.
void ql_implicit(Vector& d, Vector& e, Matrix& z) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        for (;;) {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ == 50) {
                throw DegenerateInputError("sym_eig: QL iteration failed to converge");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (int k = 0; k < n; ++k) {
                    f = z(k, i + 1);
                    z(k, i + 1) = s * z(k, i) + c * f;
                    z(k, i) = c * z(k, i) - s * f;
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

}  // namespace

EigResult sym_eig(const Matrix& s) {
    require_finite(s, "sym_eig");
    require_symmetric(s, "sym_eig");
    const int n = s.rows();
    if (n == 0) throw UsageError("sym_eig: empty matrix");

    // Work on the exact symmetric average so roundoff in the input cannot
    // leak asymmetry into the factorization.
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (s(i, j) + s(j, i));

    Vector d, e;
    if (n == 1) {
        d = {a(0, 0)};
        a(0, 0) = 1.0;
    } else {
        tridiagonalize(a, d, e);
        ql_implicit(d, e, a);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

    EigResult out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        const int src = order[k];
        out.values[k] = d[src];
        int arg = 0;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(a(i, src));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        const double sign = (a(arg, src) < 0.0) ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) out.vectors(i, k) = sign * a(i, src);
    }
    return out;
}

Vector solve_spd(const Matrix& s, const Vector& b) {
    require_finite(s, "solve_spd");
    require_finite(b, "solve_spd");
    require_symmetric(s, "solve_spd");
    const int n = s.rows();
    if (n != static_cast<int>(b.size())) throw UsageError("solve_spd: dimension mismatch");

    // Lower Cholesky factor; a non-positive pivot means s is not positive
    // definite to working precision.
    Matrix l(n, n, 0.0);
    for (int j = 0; j < n; ++j) {
        double diag = s(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0)) {
            throw DegenerateInputError("solve_spd: matrix not positive definite");
        }
        l(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            double acc = s(i, j);
            for (int k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / l(j, j);
        }
    }

    Vector y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = b[i];
        for (int k = 0; k < i; ++k) acc -= l(i, k) * y[k];
        y[i] = acc / l(i, i);
    }
    Vector x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double acc = y[i];
        for (int k = i + 1; k < n; ++k) acc -= l(k, i) * x[k];
        x[i] = acc / l(i, i);
    }
    return x;
}

}  // namespace riemopt::linalg
