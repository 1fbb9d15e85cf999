#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ksupg/analysis.hpp"
#include "ksupg/cases.hpp"

namespace ksupg {

struct SchemeRun {
    std::size_t iterations = 0;
    double wall_time = 0.0;
    bool converged = false;
};

struct CompareRow {
    Index nx = 0;
    Index ny = 0;
    SchemeRun explicit_run;
    SchemeRun implicit_run;
    double iteration_speedup = 0.0;      // explicit iterations / implicit iterations
    double computational_speedup = 0.0;  // explicit time / implicit time
    std::optional<MatrixDiagnostics> explicit_matrix;
    std::optional<MatrixDiagnostics> implicit_matrix;
    std::string error;  // non-empty when this grid failed
};

struct CompareReport {
    std::string case_name;
    double tolerance = 0.0;
    std::vector<CompareRow> rows;
};

struct CompareOptions {
    bool concurrent = false;   // run the two schemes of a grid on separate threads
    bool diagnostics = true;   // condition numbers of both system matrices on the initial field
    std::optional<std::size_t> max_steps;
};

/// Runs the case with θ = 0 and θ = 1 (default CFLs) on each grid down to `tolerance`.
/// A failing grid yields a row with `error` set instead of aborting the table.
CompareReport compare_explicit_implicit(const std::string& case_name, const std::vector<std::pair<Index, Index>>& grids,
                                        double tolerance, const CompareOptions& options = {});

/// Plain-text table of iterations, times, speed-ups and matrix diagnostics.
std::string format_report(const CompareReport& report);

}  // namespace ksupg
