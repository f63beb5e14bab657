#include <fstream>
#include <iostream>
#include <vector>

#include "riemopt/bench.hpp"
#include "riemopt/diag.hpp"
#include "riemopt/errors.hpp"

namespace {

int run_checks() {
    bool all_passed = true;
    for (const riemopt::diag::CheckResult& r : riemopt::diag::run_all()) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
        all_passed = all_passed && r.passed;
    }
    return all_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace riemopt;
    try {
        bench::CliInvocation inv = bench::parse_cli(argc, argv);
        if (inv.command == bench::CliInvocation::Command::Check) return run_checks();

        std::vector<bench::ComparisonRow> rows = bench::run_experiments(inv.specs);

        std::ofstream file;
        std::ostream* out = &std::cout;
        if (!inv.out_path.empty()) {
            file.open(inv.out_path);
            if (!file) {
                std::cerr << "cannot open output file: " << inv.out_path << '\n';
                return 1;
            }
            out = &file;
        }
        if (inv.format == "json") {
            bench::emit_json(rows, *out);
        } else {
            bench::emit_csv(rows, *out);
        }
        out->flush();
        if (!*out) {
            std::cerr << "write failed" << (inv.out_path.empty() ? "" : ": " + inv.out_path)
                      << '\n';
            return 1;
        }
        return bench::exit_code_for(rows);
    } catch (const bench::CliHelp& help) {
        std::cout << help.what();
        return 0;
    } catch (const UsageError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
