#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "riemopt/manifolds.hpp"
#include "riemopt/rng.hpp"

using riemopt::DegenerateInputError;
using riemopt::Manifold;
using riemopt::ManifoldPoint;
using riemopt::Rng;
using riemopt::TangentVector;
using riemopt::UsageError;
using namespace riemopt::linalg;

namespace {

std::vector<Manifold> all_manifolds() {
    return {Manifold::euclidean(3), Manifold::sphere(2),      Manifold::sphere(5),
            Manifold::stiefel(4, 2), Manifold::stiefel(5, 3), Manifold::stiefel(3, 3)};
}

// Ambient projector matrix assembled column by column, for operator-level
// checks of idempotence and self-adjointness.
Matrix projector_matrix(const Manifold& m, const ManifoldPoint& x) {
    const int dim = m.ambient_dim();
    Matrix p(dim, dim);
    for (int j = 0; j < dim; ++j) {
        Vector e(dim, 0.0);
        e[j] = 1.0;
        Vector col = m.project_tangent(x, e).coords();
        for (int i = 0; i < dim; ++i) p(i, j) = col[i];
    }
    return p;
}

double matrix_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

}  // namespace

TEST_CASE("constructors validate dimensions") {
    CHECK_THROWS_AS(Manifold::euclidean(0), UsageError);
    CHECK_THROWS_AS(Manifold::sphere(1), UsageError);
    CHECK_THROWS_AS(Manifold::stiefel(2, 3), UsageError);
    CHECK_THROWS_AS(Manifold::stiefel(2, 0), UsageError);
    CHECK(Manifold::euclidean(4).intrinsic_dim() == 4);
    CHECK(Manifold::sphere(10).intrinsic_dim() == 9);
    CHECK(Manifold::stiefel(10, 3).intrinsic_dim() == 24);
    CHECK(Manifold::stiefel(10, 3).ambient_dim() == 30);
    CHECK(Manifold::sphere(10).name() == "sphere(10)");
    CHECK(Manifold::stiefel(10, 3).name() == "stiefel(10,3)");
}

TEST_CASE("make_point accepts feasible and rejects infeasible coordinates") {
    Manifold s = Manifold::sphere(3);
    CHECK_NOTHROW(s.make_point({1.0, 0.0, 0.0}));
    CHECK_THROWS_AS(s.make_point({1.0, 1.0, 0.0}), UsageError);
    CHECK_THROWS_AS(s.make_point({1.0, 0.0}), UsageError);
    CHECK(s.check_point({0.0, 0.0, 1.0}));
    CHECK_FALSE(s.check_point({0.0, 0.0, 1.001}));
    CHECK(s.check_point({0.0, 0.0, 1.001}, 1e-2));

    Manifold st = Manifold::stiefel(3, 2);
    // Columns e1, e2 written row-major.
    CHECK_NOTHROW(st.make_point({1.0, 0.0, 0.0, 1.0, 0.0, 0.0}));
    CHECK_THROWS_AS(st.make_point({1.0, 1.0, 0.0, 1.0, 0.0, 0.0}), UsageError);

    Manifold e = Manifold::euclidean(2);
    CHECK_NOTHROW(e.make_point({5.0, -3.0}));
    CHECK(e.point_residual({5.0, -3.0}) == 0.0);
}

TEST_CASE("random points are feasible across manifolds") {
    Rng rng(17);
    for (const Manifold& m : all_manifolds()) {
        for (int trial = 0; trial < 25; ++trial) {
            ManifoldPoint x = m.random_point(rng);
            CHECK(m.point_residual(x.coords()) <= 1e-12);
        }
    }
}

TEST_CASE("projection produces tangent vectors and is idempotent") {
    Rng rng(23);
    for (const Manifold& m : all_manifolds()) {
        for (int trial = 0; trial < 20; ++trial) {
            ManifoldPoint x = m.random_point(rng);
            Vector u = riemopt::random_vector(rng, m.ambient_dim());
            TangentVector v = m.project_tangent(x, u);
            CHECK(m.tangent_residual(x, v.coords()) <= 1e-12);
            Vector twice = m.project_tangent(x, v.coords()).coords();
            double drift = 0.0;
            for (std::size_t i = 0; i < twice.size(); ++i)
                drift = std::max(drift, std::abs(twice[i] - v.coords()[i]));
            CHECK(drift <= 1e-12 * std::max(1.0, max_abs(u)));
        }
    }
}

TEST_CASE("projector is idempotent and self-adjoint as an operator") {
    Rng rng(29);
    for (const Manifold& m : all_manifolds()) {
        ManifoldPoint x = m.random_point(rng);
        Matrix p = projector_matrix(m, x);
        CHECK(matrix_diff(matmul(p, p), p) <= 1e-12);
        CHECK(matrix_diff(transpose(p), p) <= 1e-12);
    }
}

TEST_CASE("known projections on the sphere") {
    Manifold s = Manifold::sphere(3);
    ManifoldPoint x = s.make_point({0.0, 0.0, 1.0});
    TangentVector v = s.project_tangent(x, {1.0, 2.0, 5.0});
    CHECK(v.coords()[0] == 1.0);
    CHECK(v.coords()[1] == 2.0);
    CHECK(v.coords()[2] == 0.0);
}

TEST_CASE("make_tangent validates tangency") {
    Manifold s = Manifold::sphere(3);
    ManifoldPoint x = s.make_point({1.0, 0.0, 0.0});
    CHECK_NOTHROW(s.make_tangent(x, {0.0, 3.0, -1.0}));
    CHECK_THROWS_AS(s.make_tangent(x, {0.5, 3.0, -1.0}), UsageError);
    CHECK(s.check_tangent(x, {0.0, 1.0, 0.0}));
    CHECK_FALSE(s.check_tangent(x, {1.0, 1.0, 0.0}));
}

TEST_CASE("retractions keep points feasible") {
    Rng rng(31);
    for (const Manifold& m : all_manifolds()) {
        for (int trial = 0; trial < 20; ++trial) {
            ManifoldPoint x = m.random_point(rng);
            Vector u = riemopt::random_vector(rng, m.ambient_dim());
            TangentVector v = m.project_tangent(x, u);
            ManifoldPoint y = m.retract(x, v);
            CHECK(m.point_residual(y.coords()) <= 1e-12);
        }
    }
}

TEST_CASE("retraction centering: zero step returns x to machine precision") {
    Rng rng(37);
    for (const Manifold& m : all_manifolds()) {
        ManifoldPoint x = m.random_point(rng);
        TangentVector zero = m.make_tangent(x, Vector(m.ambient_dim(), 0.0));
        ManifoldPoint y = m.retract(x, zero);
        double drift = 0.0;
        for (int i = 0; i < m.ambient_dim(); ++i)
            drift = std::max(drift, std::abs(y.coords()[i] - x.coords()[i]));
        CHECK(drift <= 1e-14);
    }
}

TEST_CASE("retraction local rigidity: deviation from x + tv shrinks quadratically") {
    Rng rng(41);
    for (const Manifold& m : all_manifolds()) {
        if (m.kind() == riemopt::ManifoldKind::Euclidean) continue;
        ManifoldPoint x = m.random_point(rng);
        Vector u = riemopt::random_vector(rng, m.ambient_dim());
        TangentVector v = m.project_tangent(x, u);
        const double vnorm = norm(v.coords());

        auto deviation_ratio = [&](double t) {
            TangentVector tv = m.make_tangent(x, scaled(v.coords(), t));
            ManifoldPoint y = m.retract(x, tv);
            Vector straight = m.ambient_move(x, v, t);
            Vector gap = axpy(-1.0, straight, y.coords());
            return norm(gap) / (t * vnorm);
        };

        // First-order agreement forces the per-unit-step gap to vanish with t;
        // a 100x shrink in t must shrink the ratio at least 50x.
        const double r_coarse = deviation_ratio(1e-3);
        const double r_fine = deviation_ratio(1e-5);
        CHECK(r_fine <= r_coarse / 50.0);
    }
}

TEST_CASE("euclidean retraction equals ambient_move bit for bit") {
    Rng rng(43);
    Manifold e = Manifold::euclidean(6);
    for (int trial = 0; trial < 20; ++trial) {
        ManifoldPoint x = e.random_point(rng);
        TangentVector v = e.project_tangent(x, riemopt::random_vector(rng, 6));
        ManifoldPoint y = e.retract(x, v);
        Vector z = e.ambient_move(x, v, 1.0);
        for (int i = 0; i < 6; ++i) CHECK(y.coords()[i] == z[i]);
    }
}

TEST_CASE("sphere retraction matches the normalization formula") {
    Manifold s = Manifold::sphere(2);
    ManifoldPoint x = s.make_point({1.0, 0.0});
    TangentVector v = s.make_tangent(x, {0.0, 1.0});
    ManifoldPoint y = s.retract(x, v);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(y.coords()[0] == doctest::Approx(inv_sqrt2).epsilon(1e-15));
    CHECK(y.coords()[1] == doctest::Approx(inv_sqrt2).epsilon(1e-15));
}

TEST_CASE("stiefel retraction is the QR of x + v up to a feasibility polish") {
    Rng rng(47);
    Manifold st = Manifold::stiefel(5, 2);
    ManifoldPoint x = st.random_point(rng);
    TangentVector v = st.project_tangent(x, riemopt::random_vector(rng, 10));
    ManifoldPoint y = st.retract(x, v);

    Matrix w(5, 2);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 2; ++j) w(i, j) = x.coords()[i * 2 + j] + v.coords()[i * 2 + j];
    Matrix q = thin_qr(w).q;
    // The retraction re-orthonormalizes the QR factor; the polish moves
    // coordinates by at most O(eps), never more.
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(y.coords()[i * 2 + j] == doctest::Approx(q(i, j)).epsilon(1e-13));

    // Gram residual of the retracted point is at the representation floor and
    // no worse than the raw QR factor's.
    auto gram_residual = [](const std::vector<double>& flat) {
        double worst = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double dot = 0.0;
                for (int i = 0; i < 5; ++i) dot += flat[i * 2 + a] * flat[i * 2 + b];
                worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
            }
        return worst;
    };
    std::vector<double> q_flat(10);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 2; ++j) q_flat[i * 2 + j] = q(i, j);
    CHECK(gram_residual(y.coords()) <= gram_residual(q_flat) + 1e-15);
    CHECK(gram_residual(y.coords()) <= 5e-16);
}

TEST_CASE("retract rejects a tangent vector from another point") {
    Rng rng(53);
    Manifold s = Manifold::sphere(4);
    ManifoldPoint x = s.random_point(rng);
    ManifoldPoint z = s.random_point(rng);
    TangentVector v = s.project_tangent(z, riemopt::random_vector(rng, 4));
    CHECK_THROWS_AS(s.retract(x, v), UsageError);
}

TEST_CASE("ambient_move is the exact coordinate formula") {
    Manifold s = Manifold::sphere(3);
    ManifoldPoint x = s.make_point({1.0, 0.0, 0.0});
    TangentVector v = s.make_tangent(x, {0.0, 2.0, -4.0});
    Vector y = s.ambient_move(x, v, 0.5);
    CHECK(y[0] == 1.0);
    CHECK(y[1] == 1.0);
    CHECK(y[2] == -2.0);
    CHECK(s.point_residual(y) > 1e-10);  // leaves the sphere, by design
}

TEST_CASE("tangent_basis is orthonormal, tangent, and spans the tangent space") {
    Rng rng(59);
    for (const Manifold& m : all_manifolds()) {
        ManifoldPoint x = m.random_point(rng);
        Matrix b = m.tangent_basis(x);
        CHECK(b.rows() == m.ambient_dim());
        CHECK(b.cols() == m.intrinsic_dim());

        Matrix btb = matmul(transpose(b), b);
        CHECK(matrix_diff(btb, Matrix::identity(m.intrinsic_dim())) <= 1e-12);

        Vector column(m.ambient_dim());
        for (int j = 0; j < b.cols(); ++j) {
            for (int i = 0; i < b.rows(); ++i) column[i] = b(i, j);
            CHECK(m.tangent_residual(x, column) <= 1e-10);
        }

        // B B^T must reproduce the analytic projector.
        Matrix bbt = matmul(b, transpose(b));
        CHECK(matrix_diff(bbt, projector_matrix(m, x)) <= 1e-10);
    }
}

TEST_CASE("tangent_basis is deterministic and identity in flat space") {
    Rng rng(61);
    Manifold s = Manifold::sphere(6);
    ManifoldPoint x = s.random_point(rng);
    Matrix b1 = s.tangent_basis(x);
    Matrix b2 = s.tangent_basis(x);
    CHECK(matrix_diff(b1, b2) == 0.0);

    Manifold e = Manifold::euclidean(3);
    ManifoldPoint origin = e.make_point({0.0, 0.0, 0.0});
    Matrix be = e.tangent_basis(origin);
    CHECK(matrix_diff(be, Matrix::identity(3)) == 0.0);
}

TEST_CASE("tangent_basis survives axis-aligned sphere points") {
    // At x = e1 the first coordinate of every probe column is annihilated;
    // the fixed probe must still produce a full tangent basis.
    Manifold s = Manifold::sphere(4);
    ManifoldPoint x = s.make_point({1.0, 0.0, 0.0, 0.0});
    Matrix b = s.tangent_basis(x);
    CHECK(matrix_diff(matmul(transpose(b), b), Matrix::identity(3)) <= 1e-12);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(b(0, j)) <= 1e-14);
}

TEST_CASE("curvature_term vanishes in flat space and is tangent elsewhere") {
    Rng rng(67);
    Manifold e = Manifold::euclidean(4);
    ManifoldPoint xe = e.random_point(rng);
    Vector ce = e.curvature_term(xe, riemopt::random_vector(rng, 4), riemopt::random_vector(rng, 4));
    CHECK(max_abs(ce) == 0.0);

    for (const Manifold& m : {Manifold::sphere(5), Manifold::stiefel(5, 2)}) {
        ManifoldPoint x = m.random_point(rng);
        TangentVector u = m.project_tangent(x, riemopt::random_vector(rng, m.ambient_dim()));
        Vector g = riemopt::random_vector(rng, m.ambient_dim());
        Vector c = m.curvature_term(x, u.coords(), g);
        CHECK(m.tangent_residual(x, c) <= 1e-10);
    }
}

TEST_CASE("sphere curvature_term matches its closed form") {
    Rng rng(71);
    Manifold s = Manifold::sphere(4);
    ManifoldPoint x = s.random_point(rng);
    TangentVector u = s.project_tangent(x, riemopt::random_vector(rng, 4));
    Vector g = riemopt::random_vector(rng, 4);
    Vector c = s.curvature_term(x, u.coords(), g);
    const double xg = inner(x.coords(), g);
    for (int i = 0; i < 4; ++i) {
        CHECK(c[i] == doctest::Approx(-xg * u.coords()[i]).epsilon(1e-14));
    }
}
