// Command-line driver: run a benchmark case, scan explicit stability, compare explicit and
// implicit convergence, or write the unstructured shock-reflection mesh.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ksupg/analysis.hpp"
#include "ksupg/cases.hpp"
#include "ksupg/compare.hpp"
#include "ksupg/error.hpp"
#include "ksupg/io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNotConverged = 3;
constexpr int kIo = 4;

int exit_code(ksupg::ErrorCode code) {
    using ksupg::ErrorCode;
    switch (code) {
        case ErrorCode::IoError: return kIo;
        case ErrorCode::LinearSolverFailure:
        case ErrorCode::InvalidState:
        case ErrorCode::SingularMatrix:
        case ErrorCode::VacuumFormation: return kNotConverged;
        default: return kInvalid;
    }
}

std::pair<ksupg::Index, ksupg::Index> parse_grid(const std::string& text) {
    const auto whole = [&](std::string_view part) {
        ksupg::Index n = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), n);
        if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty())
            ksupg::fail(ksupg::ErrorCode::InvalidArgument, "grid '" + text + "' is not of the form NX or NXxNY");
        return n;
    };
    const std::string_view v = text;
    const auto x = v.find_first_of("xX");
    if (x == std::string_view::npos) {
        const auto n = whole(v);
        return {n, n};
    }
    return {whole(v.substr(0, x)), whole(v.substr(x + 1))};
}

struct RunArgs {
    std::string name;
    std::optional<double> theta, cfl, steady_tol, final_time, mach;
    std::string grid, mesh, out, format = "csv";
    bool no_shock = false, lumped = false, triangles = false, jacobi = false, physical_sensor = false;
    std::optional<std::size_t> max_steps;
};

int do_run(const RunArgs& a) {
    ksupg::CaseOverrides o;
    o.theta = a.theta;
    o.cfl = a.cfl;
    o.steady_tol = a.steady_tol;
    o.final_time = a.final_time;
    o.mach = a.mach;
    o.max_steps = a.max_steps;
    o.triangles = a.triangles;
    if (!a.grid.empty()) std::tie(o.nx, o.ny) = parse_grid(a.grid);
    if (!a.mesh.empty()) o.mesh_file = a.mesh;
    if (a.no_shock) o.shock_capturing = false;
    if (a.lumped) o.mass_lumping = true;
    if (a.jacobi) o.jacobi = true;
    if (a.physical_sensor) o.sensor_frame = ksupg::GradientFrame::Physical;
    ksupg::OutputOptions out;
    if (!a.out.empty()) out.directory = a.out;
    out.csv = a.format == "csv" || a.format == "both";
    out.vtk = a.format == "vtk" || a.format == "both";

    const ksupg::RunArtifacts r = ksupg::run_case(a.name, o, out);
    const double last = r.run.history.empty() ? 0.0 : r.run.history.back().residue;
    std::printf("case %s: %zu steps, t = %.6g, final residue %.3e, wall %.2f s\n", a.name.c_str(), r.iterations,
                r.run.time, last, r.wall_time);
    if (r.shock_angle) std::printf("shock angle to the wall: %.2f deg\n", *r.shock_angle);
    for (const auto& f : r.files) std::printf("wrote %s\n", f.string().c_str());
    if (!r.run.converged) {
        std::fprintf(stderr, "steady tolerance not reached within %zu steps\n", r.config.max_steps);
        return kNotConverged;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"KSUPG finite element solver for Burgers and Euler benchmarks"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a registered case");
    run_cmd->add_option("case", run.name, "Case name (see `ksupg list`)")->required();
    run_cmd->add_option("--theta", run.theta, "0 explicit, 1 implicit")->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--cfl", run.cfl, "CFL number");
    run_cmd->add_option("--grid", run.grid, "Nodes (1D) or NXxNY elements (2D)");
    run_cmd->add_option("--mesh", run.mesh, "Triangle mesh file");
    run_cmd->add_option("--steady-tol", run.steady_tol, "Residue threshold for steady cases");
    run_cmd->add_option("--final-time", run.final_time, "Final time for transient cases");
    run_cmd->add_option("--mach", run.mach, "Free-stream Mach number (half_cylinder)");
    run_cmd->add_option("--max-steps", run.max_steps, "Step cap");
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--format", run.format, "csv, vtk or both")->check(CLI::IsMember({"csv", "vtk", "both"}));
    run_cmd->add_flag("--no-shock-capture", run.no_shock, "Disable the shock-capturing diffusion");
    run_cmd->add_flag("--lumped-mass", run.lumped, "Row-sum lumped mass on the explicit left-hand side");
    run_cmd->add_flag("--triangles", run.triangles, "Structured T3 mesh instead of Q4");
    run_cmd->add_flag("--jacobi", run.jacobi, "Jacobi-preconditioned BiCGSTAB");
    run_cmd->add_flag("--physical-sensor", run.physical_sensor, "Shock sensor gradient in physical coordinates");

    std::size_t stab_grid = 32;
    std::string sweep = "0.001:0.01:46", stab_out;
    double c1 = 1.0, c2 = 1.0, beta = 1.0;
    bool printed = false;
    auto* stab_cmd = app.add_subcommand("stability", "Spectral radius of the explicit advection update");
    stab_cmd->add_option("--grid", stab_grid, "Elements per side of the unit square")->check(CLI::Range(1, 44));
    stab_cmd->add_option("--dt-sweep", sweep, "lo:hi:steps");
    stab_cmd->add_option("--c1", c1, "Advection speed in x");
    stab_cmd->add_option("--c2", c2, "Advection speed in y");
    stab_cmd->add_option("--beta", beta, "Kinetic beta")->check(CLI::PositiveNumber);
    stab_cmd->add_flag("--printed", printed, "Use the printed diffusion coefficients instead of the scheme's");
    stab_cmd->add_option("--out", stab_out, "CSV file for dt, spectral_radius");

    std::string cmp_case, cmp_grids = "60x20,120x40";
    double cmp_tol = std::pow(10.0, -3.5);
    bool concurrent = false, no_diag = false;
    std::optional<std::size_t> cmp_steps;
    auto* cmp_cmd = app.add_subcommand("compare", "Explicit versus implicit convergence on several grids");
    cmp_cmd->add_option("case", cmp_case, "Steady case name")->required();
    cmp_cmd->add_option("--grids", cmp_grids, "Comma-separated NXxNY list");
    cmp_cmd->add_option("--tol", cmp_tol, "Residue tolerance");
    cmp_cmd->add_option("--max-steps", cmp_steps, "Step cap per run");
    cmp_cmd->add_flag("--concurrent", concurrent, "Run both schemes of a grid at the same time");
    cmp_cmd->add_flag("--no-diagnostics", no_diag, "Skip matrix diagnostics");

    std::string mesh_out = "data/shock_reflection_t3.mesh", mesh_grid = "72x32";
    double jitter = 0.15;
    unsigned seed = 1;
    auto* mesh_cmd = app.add_subcommand("mesh", "Write the unstructured T3 mesh for the shock-reflection case");
    mesh_cmd->add_option("--out", mesh_out, "Mesh file");
    mesh_cmd->add_option("--grid", mesh_grid, "NXxNY cells before splitting");
    mesh_cmd->add_option("--jitter", jitter, "Interior node perturbation, fraction of a cell")->check(CLI::Range(0.0, 0.3));
    mesh_cmd->add_option("--seed", seed, "Jitter seed");

    auto* list_cmd = app.add_subcommand("list", "List registered cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (*run_cmd) return do_run(run);

        if (*stab_cmd) {
            double lo = 0.0, hi = 0.0;
            std::size_t steps = 0;
            char tail = 0;
            std::istringstream in(sweep);
            char c_a = 0, c_b = 0;
            if (!(in >> lo >> c_a >> hi >> c_b >> steps) || c_a != ':' || c_b != ':' || (in >> tail))
                ksupg::fail(ksupg::ErrorCode::InvalidArgument, "--dt-sweep expects lo:hi:steps");
            const ksupg::Mesh mesh = ksupg::build_structured_quad_mesh(stab_grid, stab_grid, {});
            const ksupg::AdvectionProblem problem{
                c1, c2, beta, printed ? ksupg::AmplificationModel::Printed : ksupg::AmplificationModel::Scheme};
            const ksupg::StabilityReport report = ksupg::stability_sweep(mesh, problem, lo, hi, steps);
            std::printf("dt,spectral_radius\n");
            for (std::size_t k = 0; k < report.dt_values.size(); ++k)
                std::printf("%.6g,%.12f\n", report.dt_values[k], report.spectral_radii[k]);
            if (std::isnan(report.dt_critical))
                std::printf("no stability threshold inside [%g, %g]\n", lo, hi);
            else
                std::printf("critical dt: %.6g\n", report.dt_critical);
            if (!stab_out.empty()) ksupg::write_csv(report, stab_out);
            return kOk;
        }

        if (*cmp_cmd) {
            std::vector<std::pair<ksupg::Index, ksupg::Index>> grids;
            std::istringstream in(cmp_grids);
            std::string item;
            while (std::getline(in, item, ',')) grids.push_back(parse_grid(item));
            ksupg::CompareOptions options;
            options.concurrent = concurrent;
            options.diagnostics = !no_diag;
            options.max_steps = cmp_steps;
            const ksupg::CompareReport report = ksupg::compare_explicit_implicit(cmp_case, grids, cmp_tol, options);
            std::fputs(ksupg::format_report(report).c_str(), stdout);
            for (const auto& r : report.rows)
                if (!r.error.empty() || !r.explicit_run.converged || !r.implicit_run.converged) return kNotConverged;
            return kOk;
        }

        if (*mesh_cmd) {
            const auto [nx, ny] = parse_grid(mesh_grid);
            const ksupg::Mesh mesh = ksupg::build_structured_tri_mesh(nx, ny, {0.0, 3.0, 0.0, 1.0}, jitter, seed)
                                         .retagged({{"bottom", ksupg::BoundaryTag::Wall},
                                                    {"right", ksupg::BoundaryTag::SupersonicOutflow},
                                                    {"top", ksupg::BoundaryTag::Dirichlet},
                                                    {"left", ksupg::BoundaryTag::SupersonicInflow}});
            ksupg::write_triangle_mesh(mesh, mesh_out);
            std::printf("wrote %s: %zu nodes, %zu triangles\n", mesh_out.c_str(), mesh.node_count(),
                        mesh.element_count());
            return kOk;
        }

        if (*list_cmd) {
            for (const auto& c : ksupg::case_registry())
                std::printf("%-20s %s\n", c.name.c_str(), c.summary.c_str());
            return kOk;
        }
    } catch (const ksupg::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIo;
    }
    return kInvalid;
}
