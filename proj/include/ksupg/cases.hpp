#pragma once

/**
 * @file cases.hpp
 * @brief Registry of the benchmark problems and a driver that runs one of them end to end.
 */

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ksupg/boundary.hpp"
#include "ksupg/field.hpp"
#include "ksupg/mesh.hpp"
#include "ksupg/solver.hpp"

namespace ksupg {

struct CaseSpec {
    std::string name;
    std::string summary;
    Equation equation = Equation::Euler1D;
    GasModel gas;
    ScalarFlux flux;
    /// Default grid: node count in 1D, element counts in 2D.
    Index nx = 0;
    Index ny = 0;
    /// Builds the tagged mesh for a grid; `triangles` selects T3 where the case supports it.
    std::function<Mesh(Index nx, Index ny, bool triangles)> mesh;
    StateFunction initial;
    BoundaryData boundary;
    /// Explicit defaults; theta = 1 switches the CFL to implicit_cfl unless overridden.
    SolverConfig config;
    double implicit_cfl = 1.0;
    bool steady = false;
    double mach = 0.0;  // free-stream Mach number where it parameterizes the case
};

/// All eight registered cases, built once.
const std::vector<CaseSpec>& case_registry();

/// Throws NotFound for unknown names.
const CaseSpec& find_case(const std::string& name);

/// The half-cylinder case at another free-stream Mach number.
CaseSpec half_cylinder_case(double mach);

struct CaseOverrides {
    std::optional<double> theta;
    std::optional<double> cfl;
    std::optional<double> steady_tol;
    std::optional<double> final_time;
    std::optional<double> mach;
    std::optional<Index> nx;
    std::optional<Index> ny;
    std::optional<std::filesystem::path> mesh_file;
    bool triangles = false;
    std::optional<bool> shock_capturing;
    std::optional<bool> mass_lumping;
    std::optional<bool> jacobi;
    std::optional<std::size_t> max_steps;
    std::optional<GradientFrame> sensor_frame;
    std::optional<CrossDiffusion> cross;
};

/// Mesh, configured solver and initial field of one case, ready to march.
struct PreparedCase {
    CaseSpec spec;
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<const Solver> solver;
    ConservedField field;
};

/// Applies overrides (validated: InvalidArgument) and builds everything a run needs.
PreparedCase prepare_case(const std::string& name, const CaseOverrides& overrides = {});

struct OutputOptions {
    std::optional<std::filesystem::path> directory;
    bool csv = true;
    bool vtk = false;
};

struct RunArtifacts {
    std::string case_name;
    SolverConfig config;
    std::unique_ptr<ConservedField> field;
    RunResult run;
    std::size_t iterations = 0;
    double wall_time = 0.0;
    std::optional<double> shock_angle;  // oblique shock only, when a shock is found
    std::vector<std::filesystem::path> files;
};

/// Runs a case to its final time or steady state and writes the requested files.
/// Solver errors are rethrown with the case name prepended.
RunArtifacts run_case(const std::string& name, const CaseOverrides& overrides = {}, const OutputOptions& output = {});

/// Marches an already prepared case (transient or steady as the case demands).
RunResult march(PreparedCase& prepared);

}  // namespace ksupg
