#pragma once

#include <vector>

#include "riemopt/errors.hpp"

namespace riemopt::linalg {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Sized at construction; shape is fixed.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw UsageError("Matrix: negative dimension");
    }

    static Matrix identity(int n) {
        Matrix m(n, n, 0.0);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int i, int j) noexcept {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }
    double operator()(int i, int j) const noexcept {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    Vector& data() noexcept { return data_; }
    const Vector& data() const noexcept { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    Vector data_;
};

struct QrResult {
    Matrix q;  // rows x cols, orthonormal columns
    Matrix r;  // cols x cols, upper triangular, positive diagonal
};

struct EigResult {
    Vector values;   // ascending
    Matrix vectors;  // column k pairs with values[k]; deterministic sign
};

// Euclidean inner product. Same accumulation order for both arguments, so
// inner(x, y) == inner(y, x) exactly in IEEE arithmetic.
double inner(const Vector& x, const Vector& y);
double norm(const Vector& x);

// Neumaier-compensated accumulator with an exact fma product split. Sums built
// from add/add_product carry O(eps^2) error, so value() is the input total
// rounded essentially once. Objective evaluations use this: backtracking
// comparisons near stationarity hinge on sub-ulp differences that a plain
// accumulation scrambles.
class CompensatedSum {
public:
    void add(double value) noexcept;
    void add_product(double a, double b) noexcept;  // accumulates a*b exactly
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double max_abs(const Vector& x);
double max_abs(const Matrix& a);

Vector scaled(const Vector& x, double s);
Vector axpy(double alpha, const Vector& x, const Vector& y);  // alpha*x + y

Matrix transpose(const Matrix& a);
Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& x);
Vector tmatvec(const Matrix& a, const Vector& x);  // a^T x

// Householder thin QR of an m x p matrix, m >= p. R has a positive diagonal.
// A diagonal entry of R below 1e-14 * max(1, max_abs(a)) reports rank
// deficiency as DegenerateInputError.
QrResult thin_qr(const Matrix& a);

// Symmetric eigendecomposition via Householder tridiagonalization followed by
// implicit-shift QL. Requires max_abs(s - s^T) <= 1e-10 * max(1, max_abs(s)).
// Eigenvalues ascend; each eigenvector's largest-magnitude entry is positive.
EigResult sym_eig(const Matrix& s);

// Cholesky solve of s x = b for symmetric positive definite s. A non-positive
// pivot reports DegenerateInputError.
Vector solve_spd(const Matrix& s, const Vector& b);

}  // namespace riemopt::linalg
