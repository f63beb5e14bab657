#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "riemopt/bench.hpp"
#include "riemopt/linesearch.hpp"
#include "riemopt/manifolds.hpp"
#include "riemopt/objectives.hpp"
#include "riemopt/rng.hpp"
#include "riemopt/solver.hpp"

namespace py = pybind11;

using namespace riemopt;
using linalg::Matrix;
using linalg::Vector;

namespace {

Matrix matrix_from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return Matrix(0, 0);
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows.front().size());
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) {
            throw UsageError("matrix_from_rows: ragged rows");
        }
        for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<Vector> matrix_to_rows(const Matrix& m) {
    std::vector<Vector> rows(m.rows(), Vector(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

}  // namespace

PYBIND11_MODULE(riemopt, m) {
    m.doc() =
        "Riemannian Newton methods with a two-stage backtracking line search "
        "that tests a cheap ambient surrogate before paying for a retraction.";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ArithmeticError);
    py::register_exception<LineSearchFailure>(m, "LineSearchFailureError", PyExc_RuntimeError);

    py::class_<Matrix>(m, "Matrix")
        .def(py::init<int, int, double>(), py::arg("rows"), py::arg("cols"),
             py::arg("fill") = 0.0)
        .def_static("identity", &Matrix::identity, py::arg("n"))
        .def_static("from_rows", &matrix_from_rows, py::arg("rows"))
        .def("to_rows", &matrix_to_rows)
        .def_property_readonly("rows", &Matrix::rows)
        .def_property_readonly("cols", &Matrix::cols)
        .def("at", [](const Matrix& a, int i, int j) { return a(i, j); })
        .def("set", [](Matrix& a, int i, int j, double v) { a(i, j) = v; })
        .def("__repr__", [](const Matrix& a) {
            std::ostringstream s;
            s << "Matrix(" << a.rows() << "x" << a.cols() << ")";
            return s.str();
        });

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next", &Rng::next)
        .def("unit", &Rng::unit)
        .def("normal", &Rng::normal);

    m.def("random_vector", &random_vector, py::arg("rng"), py::arg("n"));
    m.def("random_matrix", &random_matrix, py::arg("rng"), py::arg("rows"), py::arg("cols"));
    m.def("random_symmetric", &random_symmetric, py::arg("rng"), py::arg("n"));

    py::class_<ManifoldPoint>(m, "ManifoldPoint")
        .def_property_readonly("coords", &ManifoldPoint::coords);

    py::class_<TangentVector>(m, "TangentVector")
        .def_property_readonly("coords", &TangentVector::coords)
        .def_property_readonly("base_coords", &TangentVector::base_coords);

    py::class_<Manifold>(m, "Manifold")
        .def_static("euclidean", &Manifold::euclidean, py::arg("n"))
        .def_static("sphere", &Manifold::sphere, py::arg("n"))
        .def_static("stiefel", &Manifold::stiefel, py::arg("n"), py::arg("p"))
        .def_property_readonly("ambient_dim", &Manifold::ambient_dim)
        .def_property_readonly("intrinsic_dim", &Manifold::intrinsic_dim)
        .def_property_readonly("name", &Manifold::name)
        .def("point_residual", &Manifold::point_residual, py::arg("coords"))
        .def("tangent_residual", &Manifold::tangent_residual, py::arg("x"), py::arg("v"))
        .def("check_point", &Manifold::check_point, py::arg("coords"),
             py::arg("tol") = Manifold::kFeasibilityTol)
        .def("make_point", &Manifold::make_point, py::arg("coords"))
        .def("make_tangent", &Manifold::make_tangent, py::arg("x"), py::arg("coords"))
        .def("random_point", &Manifold::random_point, py::arg("rng"))
        .def("project_tangent", &Manifold::project_tangent, py::arg("x"), py::arg("ambient"))
        .def("retract", &Manifold::retract, py::arg("x"), py::arg("v"))
        .def("ambient_move", &Manifold::ambient_move, py::arg("x"), py::arg("p"),
             py::arg("alpha"))
        .def("__eq__", [](const Manifold& a, const Manifold& b) { return a == b; })
        .def("__repr__", [](const Manifold& a) { return a.name(); });

    py::class_<Objective>(m, "Objective")
        .def_readonly("name", &Objective::name)
        .def_readonly("lipschitz_bound", &Objective::lipschitz_bound)
        .def("eval", [](const Objective& f, const Vector& x) { return f.eval(x); },
             py::arg("x"))
        .def("euclid_grad",
             [](const Objective& f, const Vector& x) { return f.euclid_grad(x); }, py::arg("x"));

    m.def("make_rayleigh_sphere", &make_rayleigh_sphere, py::arg("a"));
    m.def("make_brockett_stiefel", &make_brockett_stiefel, py::arg("a"), py::arg("weights"));
    m.def("make_quadratic_euclidean", &make_quadratic_euclidean, py::arg("diagonal"));
    m.def("riemannian_gradient", &riemannian_gradient, py::arg("manifold"), py::arg("objective"),
          py::arg("x"));

    py::class_<LineSearchParams>(m, "LineSearchParams")
        .def(py::init<>())
        .def_readwrite("beta", &LineSearchParams::beta)
        .def_readwrite("tau", &LineSearchParams::tau)
        .def_readwrite("ell_max", &LineSearchParams::ell_max);

    py::class_<EvalCounters>(m, "EvalCounters")
        .def(py::init<>())
        .def_readwrite("ambient_f_evals", &EvalCounters::ambient_f_evals)
        .def_readwrite("retraction_evals", &EvalCounters::retraction_evals)
        .def_readwrite("retracted_f_evals", &EvalCounters::retracted_f_evals)
        .def_readwrite("gradient_evals", &EvalCounters::gradient_evals)
        .def_readwrite("hessian_builds", &EvalCounters::hessian_builds)
        .def(py::self == py::self);

    py::class_<LineSearchResult>(m, "LineSearchResult")
        .def_readonly("alpha", &LineSearchResult::alpha)
        .def_readonly("ell", &LineSearchResult::ell)
        .def_readonly("next_point", &LineSearchResult::next_point)
        .def_readonly("f_next", &LineSearchResult::f_next)
        .def_readonly("counters", &LineSearchResult::counters);

    m.def("armijo_standard", &armijo_standard, py::arg("manifold"), py::arg("objective"),
          py::arg("x"), py::arg("f_x"), py::arg("p"), py::arg("grad"), py::arg("params"));
    m.def("armijo_modified", &armijo_modified, py::arg("manifold"), py::arg("objective"),
          py::arg("x"), py::arg("f_x"), py::arg("p"), py::arg("grad"), py::arg("params"));
    m.def("approx_error_ratio", &approx_error_ratio, py::arg("manifold"), py::arg("objective"),
          py::arg("x"), py::arg("p"), py::arg("alpha"));
    m.def("theoretical_delta", &theoretical_delta, py::arg("nu"), py::arg("tau"),
          py::arg("lipschitz"));

    py::enum_<LineSearchKind>(m, "LineSearchKind")
        .value("standard", LineSearchKind::Standard)
        .value("modified", LineSearchKind::Modified);
    py::enum_<DirectionKind>(m, "DirectionKind")
        .value("newton", DirectionKind::Newton)
        .value("steepest", DirectionKind::Steepest);
    py::enum_<SolveStatus>(m, "SolveStatus")
        .value("converged", SolveStatus::Converged)
        .value("max_iter", SolveStatus::MaxIter)
        .value("linesearch_failed", SolveStatus::LineSearchFailed);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("tol_grad", &SolverConfig::tol_grad)
        .def_readwrite("max_iter", &SolverConfig::max_iter)
        .def_readwrite("nu", &SolverConfig::nu)
        .def_readwrite("rho", &SolverConfig::rho)
        .def_readwrite("linesearch", &SolverConfig::linesearch)
        .def_readwrite("direction", &SolverConfig::direction)
        .def_readwrite("params", &SolverConfig::params);

    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("iter", &IterationRecord::iter)
        .def_readonly("f", &IterationRecord::f)
        .def_readonly("grad_norm", &IterationRecord::grad_norm)
        .def_readonly("step_alpha", &IterationRecord::step_alpha)
        .def_readonly("ell", &IterationRecord::ell)
        .def_readonly("direction_norm", &IterationRecord::direction_norm)
        .def_readonly("slope", &IterationRecord::slope)
        .def_readonly("counters", &IterationRecord::counters);

    py::class_<SolverTrace>(m, "SolverTrace")
        .def_readonly("records", &SolverTrace::records)
        .def_readonly("status", &SolverTrace::status)
        .def_readonly("final_point", &SolverTrace::final_point)
        .def_readonly("f_final", &SolverTrace::f_final)
        .def_readonly("grad_norm_final", &SolverTrace::grad_norm_final)
        .def_readonly("totals", &SolverTrace::totals)
        .def("iterations", &SolverTrace::iterations);

    m.def("run", &run, py::arg("manifold"), py::arg("objective"), py::arg("x0"),
          py::arg("config"));
    m.def("run_steepest", &run_steepest, py::arg("manifold"), py::arg("objective"),
          py::arg("x0"), py::arg("config"));

    auto b = m.def_submodule("bench", "Seeded benchmark instances and comparison rows.");

    py::enum_<bench::ProblemKind>(b, "ProblemKind")
        .value("rayleigh_sphere", bench::ProblemKind::RayleighSphere)
        .value("brockett_stiefel", bench::ProblemKind::BrockettStiefel)
        .value("quadratic_euclidean", bench::ProblemKind::QuadraticEuclidean);

    b.def("parse_problem", &bench::parse_problem, py::arg("token"));

    py::class_<bench::ExperimentSpec>(b, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("problem", &bench::ExperimentSpec::problem)
        .def_readwrite("n", &bench::ExperimentSpec::n)
        .def_readwrite("p", &bench::ExperimentSpec::p)
        .def_readwrite("seed", &bench::ExperimentSpec::seed)
        .def_readwrite("config", &bench::ExperimentSpec::config)
        .def_readwrite("x0_override", &bench::ExperimentSpec::x0_override);

    b.def("spec_id", &bench::spec_id, py::arg("spec"));
    b.def("method_label", &bench::method_label, py::arg("config"));

    py::class_<bench::ProblemInstance>(b, "ProblemInstance")
        .def_readonly("manifold", &bench::ProblemInstance::manifold)
        .def_readonly("objective", &bench::ProblemInstance::objective)
        .def_readonly("x0", &bench::ProblemInstance::x0);

    b.def("make_instance", &bench::make_instance, py::arg("spec"));

    py::class_<bench::ComparisonRow>(b, "ComparisonRow")
        .def(py::init<>())
        .def_readwrite("spec_id", &bench::ComparisonRow::spec_id)
        .def_readwrite("method", &bench::ComparisonRow::method)
        .def_readwrite("problem", &bench::ComparisonRow::problem)
        .def_readwrite("n", &bench::ComparisonRow::n)
        .def_readwrite("p", &bench::ComparisonRow::p)
        .def_readwrite("seed", &bench::ComparisonRow::seed)
        .def_readwrite("status", &bench::ComparisonRow::status)
        .def_readwrite("iterations", &bench::ComparisonRow::iterations)
        .def_readwrite("f_final", &bench::ComparisonRow::f_final)
        .def_readwrite("grad_norm_final", &bench::ComparisonRow::grad_norm_final)
        .def_readwrite("ambient_f_evals", &bench::ComparisonRow::ambient_f_evals)
        .def_readwrite("retraction_evals", &bench::ComparisonRow::retraction_evals)
        .def_readwrite("retracted_f_evals", &bench::ComparisonRow::retracted_f_evals)
        .def_readwrite("gradient_evals", &bench::ComparisonRow::gradient_evals)
        .def_readwrite("hessian_builds", &bench::ComparisonRow::hessian_builds)
        .def_readwrite("wall_time_s", &bench::ComparisonRow::wall_time_s)
        .def(py::self == py::self);

    b.def("run_single", &bench::run_single, py::arg("spec"));
    b.def("run_experiments", &bench::run_experiments, py::arg("specs"));
    b.attr("CSV_HEADER") = bench::kCsvHeader;

    b.def("rows_to_csv", [](const std::vector<bench::ComparisonRow>& rows) {
        std::ostringstream s;
        bench::emit_csv(rows, s);
        return s.str();
    });
    b.def("rows_to_json", [](const std::vector<bench::ComparisonRow>& rows) {
        std::ostringstream s;
        bench::emit_json(rows, s);
        return s.str();
    });
    b.def("rows_from_json", [](const std::string& text) {
        std::istringstream s(text);
        return bench::parse_rows_json(s);
    });
    b.def("exit_code_for", &bench::exit_code_for, py::arg("rows"));
}
