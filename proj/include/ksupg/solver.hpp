#pragma once

/**
 * @file solver.hpp
 * @brief Explicit and implicit KSUPG time stepping.
 *
 * Semi-discrete system, per conserved component:
 *
 *   M dU/dt + Cx·G1 + Cy·G2 + HDx·Sx + HDxy·(Sxy + Syx) + HDy·Sy + δ∘(Dx + Dy)U = 0
 *
 * where the HD matrices are assembled from (h_e/2)·D_e. Linearizing around a frozen state
 * turns every flux into a nodal block times U (G = A·U, S = D̃·U), which gives the block
 * operator L(U) used by the implicit scheme: (M + θΔt·L)U^{n+1} = M·U^n − (1−θ)Δt·L·U^n.
 */

#include <chrono>
#include <memory>
#include <optional>
#include <vector>

#include "ksupg/boundary.hpp"
#include "ksupg/fem.hpp"
#include "ksupg/field.hpp"
#include "ksupg/linalg.hpp"
#include "ksupg/shock_capture.hpp"

namespace ksupg {

/// How the two cross-diffusion moments are paired with the assembled matrices.
enum class CrossDiffusion {
    Shared,     // HDxy·(Sxy + Syx)
    Transpose,  // HDxy·Sxy + HDyx·Syx with HDyx = HDxyᵀ
};

struct SolverConfig {
    double theta = 0.0;
    double cfl = 0.5;
    double linear_tol = 1e-10;
    std::size_t linear_maxit = 5000;
    bool jacobi = false;
    int picard_sweeps = 1;
    std::optional<double> final_time;
    double steady_tol = 1e-5;
    std::size_t max_steps = 100000;
    bool shock_capturing = false;
    double alpha = 2.0;
    SensingVariable sensing = SensingVariable::Density;
    GradientFrame sensor_frame = GradientFrame::Reference;
    bool mass_lumping = false;
    CrossDiffusion cross = CrossDiffusion::Shared;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
};

struct StepReport {
    double dt = 0.0;
    double time = 0.0;
    double residue = 0.0;
    std::size_t linear_iterations = 0;
    double wall_time = 0.0;
};

struct RunResult {
    std::vector<StepReport> history;
    bool converged = false;
    double time = 0.0;
};

class Solver {
public:
    Solver(std::shared_ptr<const Mesh> mesh, BoundaryPlan boundaries, SolverConfig config);

    const SolverConfig& config() const { return config_; }
    const GlobalOperators& operators() const { return ops_; }
    const AssemblyPattern& pattern() const { return pattern_; }
    const BoundaryPlan& boundaries() const { return bc_; }
    const Mesh& mesh() const { return *mesh_; }

    /// cfl · min_e h_e/λ_e with λ_e the largest nodal characteristic speed on the element
    /// (|u| + a for Euler, dg/du for the scalar equations, floored at 1e-8).
    double compute_dt(const ConservedField& field) const;
    double compute_dt(const ConservedField& field, double cfl) const;

    /// Nodal δ (zero vector when shock capturing is off).
    std::vector<double> shock_delta(const ConservedField& field) const;

    /// R(U) = L(U)·U evaluated directly from the nodal moments.
    std::vector<double> residual(const ConservedField& field) const;

    /// Block operator L frozen at `field`, including shock capturing when enabled.
    CsrMatrix spatial_operator(const ConservedField& field) const;

    /// Left-hand side of one step, boundary rows imposed: M̃⊗I (explicit) or M⊗I + θΔt·L (implicit).
    CsrMatrix system_matrix(const ConservedField& field, double dt) const;

    StepReport explicit_step(ConservedField& field, double dt) const;
    StepReport implicit_step(ConservedField& field, double dt) const;
    /// Dispatches on config().theta.
    StepReport step(ConservedField& field, double dt) const;

    /// Marches to config().final_time with the last step clipped.
    RunResult run_transient(ConservedField& field) const;
    /// Marches until the residue drops below config().steady_tol or max_steps is hit.
    RunResult run_steady(ConservedField& field) const;

private:
    CsrMatrix mass_operator() const;
    void finish_step(ConservedField& field, const std::vector<double>& previous, StepReport& report,
                     std::chrono::steady_clock::time_point start) const;

    std::shared_ptr<const Mesh> mesh_;
    BoundaryPlan bc_;
    SolverConfig config_;
    AssemblyPattern pattern_;
    GlobalOperators ops_;
    CsrMatrix mass_tilde_;  // consistent mass with identity rows at fixed nodes
};

/// ‖U^{n+1} − U^n‖₂ / ‖U^{n+1}‖₂.
double residue(const std::vector<double>& previous, const std::vector<double>& current);

}  // namespace ksupg
