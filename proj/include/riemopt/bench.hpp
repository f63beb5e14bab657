#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riemopt/manifolds.hpp"
#include "riemopt/objectives.hpp"
#include "riemopt/solver.hpp"

namespace riemopt::bench {

enum class ProblemKind { RayleighSphere, BrockettStiefel, QuadraticEuclidean };

std::string to_string(ProblemKind k);
// Accepts both short tokens ("rayleigh") and full names ("rayleigh_sphere").
ProblemKind parse_problem(const std::string& token);

// One solver run, fully determined by its fields: the problem data and the
// starting point are both derived from `seed` (see make_instance).
struct ExperimentSpec {
    ProblemKind problem = ProblemKind::RayleighSphere;
    int n = 0;
    int p = 0;  // Stiefel columns; 0 when not applicable
    unsigned long long seed = 0;
    SolverConfig config;
    // Test hook: replaces the seeded starting point (validated on use). The
    // CLI never sets it; problem data still comes from `seed`.
    std::optional<linalg::Vector> x0_override;
};

std::string spec_id(const ExperimentSpec& spec);
std::string method_label(const SolverConfig& config);

// Problem data and starting point generated from one seeded stream:
//   rayleigh_sphere     A = (G + G^T)/2, G standard normal n x n
//   brockett_stiefel    same A; weights N = diag(1, 2, ..., p)
//   quadratic_euclidean D_i = 100^{u_i}, u_i uniform in [0, 1)
// then x0 = random_point from the same stream. Identical (problem, n, p,
// seed) always yield the identical instance and starting point.
struct ProblemInstance {
    Manifold manifold;
    Objective objective;
    ManifoldPoint x0;
};

ProblemInstance make_instance(const ExperimentSpec& spec);

// Flat result record, one per run. Field order matches the CSV schema.
struct ComparisonRow {
    std::string spec_id;
    std::string method;
    std::string problem;
    int n = 0;
    int p = 0;
    unsigned long long seed = 0;
    std::string status;
    int iterations = 0;
    double f_final = 0.0;
    double grad_norm_final = 0.0;
    long long ambient_f_evals = 0;
    long long retraction_evals = 0;
    long long retracted_f_evals = 0;
    long long gradient_evals = 0;
    long long hessian_builds = 0;
    double wall_time_s = 0.0;  // informational; excluded from comparisons

    friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

ComparisonRow run_single(const ExperimentSpec& spec);

// Runs every spec, collecting rows in spec order. Non-converged runs are
// reported through their status field; the batch never aborts.
std::vector<ComparisonRow> run_experiments(const std::vector<ExperimentSpec>& specs);

inline constexpr const char* kCsvHeader =
    "spec_id,method,problem,n,p,seed,status,iterations,f_final,grad_norm_final,"
    "ambient_f_evals,retraction_evals,retracted_f_evals,gradient_evals,hessian_builds,"
    "wall_time_s";

// Reals carry 17 significant digits so doubles survive a round-trip.
void emit_csv(const std::vector<ComparisonRow>& rows, std::ostream& out);
void emit_json(const std::vector<ComparisonRow>& rows, std::ostream& out);
std::vector<ComparisonRow> parse_rows_json(std::istream& in);

// 0 when every run converged, 2 otherwise.
int exit_code_for(const std::vector<ComparisonRow>& rows);

// Thrown when the invocation asks for usage text; carries the text to print
// before exiting with status 0.
class CliHelp : public std::runtime_error {
public:
    explicit CliHelp(const std::string& text) : std::runtime_error(text) {}
};

// Parsed command line. `specs` is empty for the check subcommand.
struct CliInvocation {
    enum class Command { Run, Compare, Check };
    Command command = Command::Run;
    std::vector<ExperimentSpec> specs;
    std::string format = "csv";  // "csv" or "json"
    std::string out_path;        // empty means standard output
};

// Throws UsageError on malformed flags; the CLI wrapper turns that into help
// text and exit status 1.
CliInvocation parse_cli(int argc, const char* const* argv);

}  // namespace riemopt::bench
