#include "ksupg/compare.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>

#include "ksupg/error.hpp"

namespace ksupg {

namespace {

SchemeRun run_scheme(const std::string& name, const CaseOverrides& o) {
    const auto start = std::chrono::steady_clock::now();
    PreparedCase p = prepare_case(name, o);
    const RunResult r = march(p);
    SchemeRun out;
    out.iterations = r.history.size();
    out.converged = r.converged;
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

MatrixDiagnostics system_diagnostics(const std::string& name, const CaseOverrides& o) {
    const PreparedCase p = prepare_case(name, o);
    const double dt = p.solver->compute_dt(p.field);
    return matrix_diagnostics(p.solver->system_matrix(p.field, dt), true);
}

}  // namespace

CompareReport compare_explicit_implicit(const std::string& name, const std::vector<std::pair<Index, Index>>& grids,
                                        double tolerance, const CompareOptions& options) {
    require(tolerance > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
    require(find_case(name).steady, ErrorCode::InvalidArgument, "comparison needs a steady case");
    CompareReport report{name, tolerance, {}};
    for (const auto& [nx, ny] : grids) {
        CompareRow row;
        row.nx = nx;
        row.ny = ny;
        CaseOverrides ex;
        ex.nx = nx;
        ex.ny = ny;
        ex.theta = 0.0;
        ex.max_steps = options.max_steps;
        // An infinite tolerance still needs a finite threshold for the solver; any residue passes.
        ex.steady_tol = std::isinf(tolerance) ? std::numeric_limits<double>::max() : tolerance;
        CaseOverrides im = ex;
        im.theta = 1.0;
        try {
            if (options.concurrent) {
                auto fe = std::async(std::launch::async, run_scheme, name, ex);
                auto fi = std::async(std::launch::async, run_scheme, name, im);
                row.explicit_run = fe.get();
                row.implicit_run = fi.get();
            } else {
                row.explicit_run = run_scheme(name, ex);
                row.implicit_run = run_scheme(name, im);
            }
            row.iteration_speedup = static_cast<double>(row.explicit_run.iterations) /
                                    static_cast<double>(std::max<std::size_t>(row.implicit_run.iterations, 1));
            row.computational_speedup = row.explicit_run.wall_time / std::max(row.implicit_run.wall_time, 1e-12);
            if (options.diagnostics) {
                row.explicit_matrix = system_diagnostics(name, ex);
                row.implicit_matrix = system_diagnostics(name, im);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string format_report(const CompareReport& report) {
    std::string out;
    char line[512];
    std::snprintf(line, sizeof line, "case %s, residue tolerance %.3e\n", report.case_name.c_str(), report.tolerance);
    out += line;
    std::snprintf(line, sizeof line, "%-9s %10s %10s %12s %12s %10s %10s\n", "grid", "it(expl)", "it(impl)",
                  "time(expl)", "time(impl)", "it-ratio", "cpu-ratio");
    out += line;
    for (const auto& r : report.rows) {
        const std::string grid = std::to_string(r.nx) + "x" + std::to_string(r.ny);
        if (!r.error.empty()) {
            out += grid + "  failed: " + r.error + "\n";
            continue;
        }
        std::snprintf(line, sizeof line, "%-9s %9zu%s %9zu%s %12.3f %12.3f %10.2f %10.2f\n", grid.c_str(),
                      r.explicit_run.iterations, r.explicit_run.converged ? " " : "*", r.implicit_run.iterations,
                      r.implicit_run.converged ? " " : "*", r.explicit_run.wall_time, r.implicit_run.wall_time,
                      r.iteration_speedup, r.computational_speedup);
        out += line;
    }
    bool any = false;
    for (const auto& r : report.rows) any = any || (r.explicit_matrix && r.implicit_matrix);
    if (any) {
        std::snprintf(line, sizeof line, "%-9s %-8s %10s %10s %14s %s\n", "grid", "scheme", "nnz", "half-bw",
                      "cond_2", "symmetric");
        out += line;
        for (const auto& r : report.rows) {
            if (!r.explicit_matrix || !r.implicit_matrix) continue;
            const std::string grid = std::to_string(r.nx) + "x" + std::to_string(r.ny);
            for (const auto& [label, d] : {std::pair{"explicit", *r.explicit_matrix}, std::pair{"implicit", *r.implicit_matrix}}) {
                std::snprintf(line, sizeof line, "%-9s %-8s %10zu %10zu %14.4e %s\n", grid.c_str(), label, d.nnz,
                              d.half_bandwidth, d.condition_number_l2, d.symmetric ? "yes" : "no");
                out += line;
            }
        }
    }
    out += "(* = tolerance not reached within the step cap)\n";
    return out;
}

}  // namespace ksupg
