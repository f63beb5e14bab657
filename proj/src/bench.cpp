#include "riemopt/bench.hpp"

#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "riemopt/rng.hpp"

namespace riemopt::bench {

using linalg::Matrix;
using linalg::Vector;

std::string to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::RayleighSphere: return "rayleigh_sphere";
        case ProblemKind::BrockettStiefel: return "brockett_stiefel";
        case ProblemKind::QuadraticEuclidean: return "quadratic_euclidean";
    }
    throw UsageError("to_string: unknown problem kind");
}

ProblemKind parse_problem(const std::string& token) {
    if (token == "rayleigh" || token == "rayleigh_sphere") return ProblemKind::RayleighSphere;
    if (token == "brockett" || token == "brockett_stiefel") return ProblemKind::BrockettStiefel;
    if (token == "quadratic" || token == "quadratic_euclidean")
        return ProblemKind::QuadraticEuclidean;
    throw UsageError("unknown problem '" + token +
                     "' (expected rayleigh, brockett, or quadratic)");
}

std::string method_label(const SolverConfig& config) {
    return riemopt::to_string(config.linesearch) + "-" + riemopt::to_string(config.direction);
}

std::string spec_id(const ExperimentSpec& spec) {
    std::string id = to_string(spec.problem) + "_n" + std::to_string(spec.n);
    if (spec.problem == ProblemKind::BrockettStiefel) id += "_p" + std::to_string(spec.p);
    id += "_seed" + std::to_string(spec.seed) + "_" + method_label(spec.config);
    return id;
}

namespace {

ManifoldPoint starting_point(const ExperimentSpec& spec, const Manifold& m, Rng& rng) {
    if (spec.x0_override) return m.make_point(*spec.x0_override);
    return m.random_point(rng);
}

}  // namespace

ProblemInstance make_instance(const ExperimentSpec& spec) {
    Rng rng(spec.seed);
    switch (spec.problem) {
        case ProblemKind::RayleighSphere: {
            Matrix a = random_symmetric(rng, spec.n);
            Manifold m = Manifold::sphere(spec.n);
            ManifoldPoint x0 = starting_point(spec, m, rng);
            return ProblemInstance{m, make_rayleigh_sphere(a), x0};
        }
        case ProblemKind::BrockettStiefel: {
            Matrix a = random_symmetric(rng, spec.n);
            Vector weights(spec.p > 0 ? spec.p : 0);
            for (int i = 0; i < spec.p; ++i) weights[i] = static_cast<double>(i + 1);
            Manifold m = Manifold::stiefel(spec.n, spec.p);
            ManifoldPoint x0 = starting_point(spec, m, rng);
            return ProblemInstance{m, make_brockett_stiefel(a, weights), x0};
        }
        case ProblemKind::QuadraticEuclidean: {
            Vector d(spec.n > 0 ? spec.n : 0);
            for (double& v : d) v = std::pow(100.0, rng.unit());
            Manifold m = Manifold::euclidean(spec.n);
            ManifoldPoint x0 = starting_point(spec, m, rng);
            return ProblemInstance{m, make_quadratic_euclidean(d), x0};
        }
    }
    throw UsageError("make_instance: unknown problem kind");
}

ComparisonRow run_single(const ExperimentSpec& spec) {
    ProblemInstance inst = make_instance(spec);
    const auto start = std::chrono::steady_clock::now();
    SolverTrace trace = run(inst.manifold, inst.objective, inst.x0, spec.config);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    ComparisonRow row;
    row.spec_id = spec_id(spec);
    row.method = method_label(spec.config);
    row.problem = to_string(spec.problem);
    row.n = spec.n;
    row.p = spec.p;
    row.seed = spec.seed;
    row.status = riemopt::to_string(trace.status);
    row.iterations = trace.iterations();
    row.f_final = trace.f_final;
    row.grad_norm_final = trace.grad_norm_final;
    row.ambient_f_evals = trace.totals.ambient_f_evals;
    row.retraction_evals = trace.totals.retraction_evals;
    row.retracted_f_evals = trace.totals.retracted_f_evals;
    row.gradient_evals = trace.totals.gradient_evals;
    row.hessian_builds = trace.totals.hessian_builds;
    row.wall_time_s = elapsed.count();
    return row;
}

std::vector<ComparisonRow> run_experiments(const std::vector<ExperimentSpec>& specs) {
    std::vector<ComparisonRow> rows;
    rows.reserve(specs.size());
    for (const ExperimentSpec& spec : specs) rows.push_back(run_single(spec));
    return rows;
}

namespace {

std::string real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void emit_csv(const std::vector<ComparisonRow>& rows, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const ComparisonRow& r : rows) {
        out << r.spec_id << ',' << r.method << ',' << r.problem << ',' << r.n << ',' << r.p << ','
            << r.seed << ',' << r.status << ',' << r.iterations << ',' << real17(r.f_final) << ','
            << real17(r.grad_norm_final) << ',' << r.ambient_f_evals << ',' << r.retraction_evals
            << ',' << r.retracted_f_evals << ',' << r.gradient_evals << ',' << r.hessian_builds
            << ',' << real17(r.wall_time_s) << '\n';
    }
}

void emit_json(const std::vector<ComparisonRow>& rows, std::ostream& out) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ComparisonRow& r : rows) {
        nlohmann::ordered_json obj;
        obj["spec_id"] = r.spec_id;
        obj["method"] = r.method;
        obj["problem"] = r.problem;
        obj["n"] = r.n;
        obj["p"] = r.p;
        obj["seed"] = r.seed;
        obj["status"] = r.status;
        obj["iterations"] = r.iterations;
        obj["f_final"] = r.f_final;
        obj["grad_norm_final"] = r.grad_norm_final;
        obj["ambient_f_evals"] = r.ambient_f_evals;
        obj["retraction_evals"] = r.retraction_evals;
        obj["retracted_f_evals"] = r.retracted_f_evals;
        obj["gradient_evals"] = r.gradient_evals;
        obj["hessian_builds"] = r.hessian_builds;
        obj["wall_time_s"] = r.wall_time_s;
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
}

std::vector<ComparisonRow> parse_rows_json(std::istream& in) {
    nlohmann::json arr = nlohmann::json::parse(in);
    std::vector<ComparisonRow> rows;
    rows.reserve(arr.size());
    for (const auto& obj : arr) {
        ComparisonRow r;
        r.spec_id = obj.at("spec_id").get<std::string>();
        r.method = obj.at("method").get<std::string>();
        r.problem = obj.at("problem").get<std::string>();
        r.n = obj.at("n").get<int>();
        r.p = obj.at("p").get<int>();
        r.seed = obj.at("seed").get<unsigned long long>();
        r.status = obj.at("status").get<std::string>();
        r.iterations = obj.at("iterations").get<int>();
        r.f_final = obj.at("f_final").get<double>();
        r.grad_norm_final = obj.at("grad_norm_final").get<double>();
        r.ambient_f_evals = obj.at("ambient_f_evals").get<long long>();
        r.retraction_evals = obj.at("retraction_evals").get<long long>();
        r.retracted_f_evals = obj.at("retracted_f_evals").get<long long>();
        r.gradient_evals = obj.at("gradient_evals").get<long long>();
        r.hessian_builds = obj.at("hessian_builds").get<long long>();
        r.wall_time_s = obj.at("wall_time_s").get<double>();
        rows.push_back(std::move(r));
    }
    return rows;
}

int exit_code_for(const std::vector<ComparisonRow>& rows) {
    for (const ComparisonRow& r : rows)
        if (r.status != "converged") return 2;
    return 0;
}

namespace {

struct CliFlags {
    std::string problem = "rayleigh";
    int n = 100;
    int p = 3;
    unsigned long long seed = 0;
    double beta = 0.5;
    double tau = 0.1;
    double tol = 1e-8;
    int max_iter = 500;
    double nu = 1e-3;
    double rho = 1e6;
    std::string linesearch = "modified";
    std::string direction = "newton";
};

void add_common_flags(CLI::App* cmd, CliFlags& flags, CliInvocation& inv, bool with_linesearch) {
    cmd->add_option("--problem", flags.problem, "rayleigh | brockett | quadratic")
        ->capture_default_str();
    cmd->add_option("--n", flags.n, "ambient dimension (matrix rows for brockett)")
        ->capture_default_str();
    cmd->add_option("--p", flags.p, "Stiefel columns (brockett only)")->capture_default_str();
    cmd->add_option("--seed", flags.seed, "instance and starting-point seed")
        ->capture_default_str();
    cmd->add_option("--beta", flags.beta, "backtracking factor, in (0,1)")->capture_default_str();
    cmd->add_option("--tau", flags.tau, "sufficient-decrease factor, in (0,1)")
        ->capture_default_str();
    cmd->add_option("--tol", flags.tol, "gradient-norm stopping tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iter", flags.max_iter, "iteration cap")->capture_default_str();
    cmd->add_option("--nu", flags.nu, "lower clamp for the model spectrum")
        ->capture_default_str();
    cmd->add_option("--rho", flags.rho, "upper clamp for the model spectrum")
        ->capture_default_str();
    if (with_linesearch)
        cmd->add_option("--linesearch", flags.linesearch, "standard | modified")
            ->check(CLI::IsMember({"standard", "modified"}))
            ->capture_default_str();
    cmd->add_option("--direction", flags.direction, "newton | steepest")
        ->check(CLI::IsMember({"newton", "steepest"}))
        ->capture_default_str();
    cmd->add_option("--format", inv.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", inv.out_path, "output file (default: standard output)");
}

ExperimentSpec spec_from_flags(const CliFlags& flags, LineSearchKind ls) {
    ExperimentSpec spec;
    spec.problem = parse_problem(flags.problem);
    spec.n = flags.n;
    spec.p = spec.problem == ProblemKind::BrockettStiefel ? flags.p : 0;
    spec.seed = flags.seed;
    spec.config.tol_grad = flags.tol;
    spec.config.max_iter = flags.max_iter;
    spec.config.nu = flags.nu;
    spec.config.rho = flags.rho;
    spec.config.linesearch = ls;
    spec.config.direction =
        flags.direction == "steepest" ? DirectionKind::Steepest : DirectionKind::Newton;
    spec.config.params.beta = flags.beta;
    spec.config.params.tau = flags.tau;
    return spec;
}

void validate_open_unit(const char* name, double v, const CLI::App& app) {
    if (!(v > 0.0 && v < 1.0))
        throw UsageError(std::string(name) + " must lie in (0,1)\n\n" + app.help());
}

}  // namespace

CliInvocation parse_cli(int argc, const char* const* argv) {
    CLI::App app{"Newton benchmark for retraction-avoiding Armijo backtracking"};
    app.require_subcommand(1);

    CliInvocation inv;
    CliFlags flags;
    CLI::App* cmd_run = app.add_subcommand("run", "run one line-search strategy");
    CLI::App* cmd_compare =
        app.add_subcommand("compare", "run both strategies on the identical instance");
    app.add_subcommand("check", "run the built-in invariant suites");
    add_common_flags(cmd_run, flags, inv, true);
    add_common_flags(cmd_compare, flags, inv, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success&) {  // --help and friends
        throw CliHelp(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\n\n" + app.help());
    }

    validate_open_unit("--beta", flags.beta, app);
    validate_open_unit("--tau", flags.tau, app);

    if (cmd_run->parsed()) {
        inv.command = CliInvocation::Command::Run;
        LineSearchKind ls =
            flags.linesearch == "standard" ? LineSearchKind::Standard : LineSearchKind::Modified;
        inv.specs.push_back(spec_from_flags(flags, ls));
    } else if (cmd_compare->parsed()) {
        inv.command = CliInvocation::Command::Compare;
        inv.specs.push_back(spec_from_flags(flags, LineSearchKind::Standard));
        inv.specs.push_back(spec_from_flags(flags, LineSearchKind::Modified));
    } else {
        inv.command = CliInvocation::Command::Check;
    }
    return inv;
}

}  // namespace riemopt::bench
