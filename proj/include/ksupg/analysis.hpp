#pragma once

/**
 * @file analysis.hpp
 * @brief Spectral stability of the explicit scheme for 2D linear advection, and sparse
 * matrix diagnostics.
 *
 * For u_t + c₁u_x + c₂u_y = 0 the explicit update is linear, U^{n+1} = 𝒜U^n with
 * 𝒜 = I − Δt·K and K = M̃⁻¹L̃. Inflow nodes (c·n < 0 on some boundary set) are frozen:
 * their rows of M̃ are identity and their rows of L̃ vanish.
 */

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ksupg/mesh.hpp"
#include "ksupg/sparse_matrix.hpp"

namespace ksupg {

enum class AmplificationModel {
    Scheme,   // K built from the solver's own spatial operator
    Printed,  // K = M⁻¹(c₁Cx + c₂Cy + (h/2)√(β/π)·Υ) with Υ in its printed form
};

struct AdvectionProblem {
    double c1 = 1.0;
    double c2 = 1.0;
    double beta = 1.0;
    AmplificationModel model = AmplificationModel::Scheme;
};

/// Nodes of sets whose normal points against the advection velocity.
std::vector<Index> inflow_nodes(const Mesh& mesh, double c1, double c2);

/// Dense K; throws SizeLimit above 2000 nodes.
Eigen::MatrixXd explicit_update_operator(const Mesh& mesh, const AdvectionProblem& problem);

/// Dense 𝒜 = I − Δt·K.
Eigen::MatrixXd amplification_matrix(const Mesh& mesh, const AdvectionProblem& problem, double dt);

/// Eigenvalues μ of K, so that ρ(𝒜(Δt)) = max |1 − Δt·μ| for every Δt without refactoring.
class AmplificationSpectrum {
public:
    AmplificationSpectrum(const Mesh& mesh, const AdvectionProblem& problem);
    explicit AmplificationSpectrum(const Eigen::MatrixXd& update_operator);

    double radius(double dt) const;
    const std::vector<std::complex<double>>& eigenvalues() const { return mu_; }

private:
    std::vector<std::complex<double>> mu_;
};

struct SpectralRadiusResult {
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Y = A·X for a block of column vectors.
using MatrixAction = std::function<void(const Eigen::MatrixXd& X, Eigen::MatrixXd& Y)>;

/// Subspace (block power) iteration with Rayleigh-Ritz extraction, so complex dominant pairs
/// converge too. Starts from a seeded random block; stops when successive estimates differ by
/// less than tol relative. Never throws on the iteration cap; `converged` reports it.
SpectralRadiusResult spectral_radius(const MatrixAction& action, Index n, double tol = 1e-10,
                                     std::size_t maxit = 20000, std::uint64_t seed = 7);
SpectralRadiusResult spectral_radius(const Eigen::MatrixXd& A, double tol = 1e-10, std::size_t maxit = 20000,
                                     std::uint64_t seed = 7);

/// max |λ| from a dense eigendecomposition.
double spectral_radius_dense(const Eigen::MatrixXd& A);

/// Stability threshold used by the search: ρ ≤ 1 + kStableSlack counts as stable.
inline constexpr double kStableSlack = 1e-9;

/// Bisection for the largest stable Δt. Throws BadBracket unless ρ(lo) ≤ 1 < ρ(hi).
double find_critical_dt(const AmplificationSpectrum& spectrum, double dt_lo, double dt_hi, double tol = 1e-6);
double find_critical_dt(const Mesh& mesh, const AdvectionProblem& problem, double dt_lo, double dt_hi,
                        double tol = 1e-6);

struct StabilityReport {
    std::vector<double> dt_values;
    std::vector<double> spectral_radii;
    double dt_critical = 0.0;
};

/// Radii on `steps` equispaced Δt in [lo, hi] plus the bisection threshold inside that range
/// (NaN when the range does not straddle it).
StabilityReport stability_sweep(const Mesh& mesh, const AdvectionProblem& problem, double lo, double hi,
                                std::size_t steps);

struct MatrixDiagnostics {
    Index n = 0;
    std::size_t nnz = 0;
    std::size_t half_bandwidth = 0;
    double condition_number_l2 = 0.0;  // zero when not requested
    bool symmetric = false;
};

/// nnz counts stored nonzero values. The 2-norm condition number comes from a dense SVD up to
/// 2000 rows, otherwise from power iteration on AᵀA and inverse iteration with a sparse LU.
/// Throws SingularMatrix when σ_min underflows.
MatrixDiagnostics matrix_diagnostics(const CsrMatrix& A, bool compute_condition = true);

}  // namespace ksupg
