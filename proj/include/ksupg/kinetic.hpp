#pragma once

/**
 * @file kinetic.hpp
 * @brief Maxwellian moment closures for scalar advection/Burgers and the Euler equations.
 *
 * For a Maxwellian with mean velocity u and β = 1/(2RT) the split moments reduce to
 * erf(s) and e^{-s²} terms with s = u√β. Scalar closures use f = u (β/π)^{D/2} e^{-β|v-c|²}
 * where the advection speed c may depend on u (c = u/2 gives Burgers).
 */

#include <Eigen/Dense>

namespace ksupg {

/// Up to four conserved components without heap allocation.
using StateVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using StateMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

struct GasState1D {
    double rho = 1.0;
    double u = 0.0;
    double p = 1.0;
    double E = 0.0;  // specific total energy
    double gamma = 1.4;
    double R = 1.0;

    static GasState1D from_primitive(double rho, double u, double p, double gamma = 1.4, double R = 1.0);
    /// Throws InvalidState for non-positive density or pressure.
    static GasState1D from_conserved(const StateVec& U, double gamma = 1.4, double R = 1.0);
    StateVec conserved() const;
    double sound_speed() const;
    double temperature() const { return p / (rho * R); }
    /// Throws InvalidState when ρ ≤ 0, p ≤ 0, values are non-finite or E is inconsistent.
    void validate() const;
};

struct GasState2D {
    double rho = 1.0;
    double u1 = 0.0;
    double u2 = 0.0;
    double p = 1.0;
    double E = 0.0;
    double gamma = 1.4;
    double R = 1.0;

    static GasState2D from_primitive(double rho, double u1, double u2, double p, double gamma = 1.4,
                                     double R = 1.0);
    static GasState2D from_conserved(const StateVec& U, double gamma = 1.4, double R = 1.0);
    StateVec conserved() const;
    double sound_speed() const;
    double temperature() const { return p / (rho * R); }
    void validate() const;
};

struct KineticParams {
    double beta = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double I0 = 0.0;
};

KineticParams kinetic_params(const GasState1D& state);
KineticParams kinetic_params(const GasState2D& state);

/// U, fluxes G1 (G in 1D) and G2, and sign moments. In 1D only U, G1 and Sx (= S) are set.
/// Sx = ⟨Ψ, sign(v₁)v₁f⟩, Sy = ⟨Ψ, sign(v₂)v₂f⟩, Sxy = ⟨Ψ, sign(v₁)v₂f⟩, Syx = ⟨Ψ, sign(v₂)v₁f⟩.
struct MomentSet {
    StateVec U, G1, G2, Sx, Sy, Sxy, Syx;
};

/// Scalar closure with advection speed c.
MomentSet scalar1d_moments(double u, double c, double beta);
MomentSet scalar2d_moments(double u, double c1, double c2, double beta);

/// c = u/2, so s = u√β/2.
MomentSet burgers1d_moments(double u, double beta = 1.0);
MomentSet burgers2d_moments(double u, double c1, double c2, double beta = 1.0);

MomentSet euler1d_moments(const GasState1D& state);
MomentSet euler2d_moments(const GasState2D& state);

/// Flux Jacobians with A·U = G (Euler fluxes are homogeneous of degree one).
StateMat jacobian_1d(const GasState1D& state);
struct Jacobians2D {
    StateMat A1, A2;
};
Jacobians2D jacobians_2d(const GasState2D& state);

/// Lower-triangular D̃ with D̃·U = S.
StateMat dtilde_1d(const GasState1D& state);

struct DTilde2D {
    StateMat Dx, Dy, Dxy, Dyx;
};
/// D̃x·U = Sx, D̃y·U = Sy, D̃xy·U = Sxy, D̃yx·U = Syx; the energy-row diagonals are
/// the energy sign moments divided by ρE.
DTilde2D dtilde_2d(const GasState2D& state);

/// Scalar closures are linear in u for frozen speeds; these are the 1×1 coefficients.
struct ScalarCoefficients {
    double dx = 0.0, dy = 0.0, dxy = 0.0, dyx = 0.0;
};
ScalarCoefficients scalar_dtilde(double c1, double c2, double beta);

/// Direct numerical evaluation of the defining velocity-space integrals.
/// Full-range integrals use `order`-point Gauss-Hermite; half-range integrals use
/// `order`-point Gauss-Legendre on each half of [u - 8/√β, u + 8/√β] split at v = 0.
/// The internal-energy variable is integrated analytically. Requires order ≥ 16.
MomentSet moment_oracle_scalar1d(double u, double c, double beta, int order = 64);
MomentSet moment_oracle_scalar2d(double u, double c1, double c2, double beta, int order = 64);
MomentSet moment_oracle(const GasState1D& state, int order = 64);
MomentSet moment_oracle(const GasState2D& state, int order = 64);

}  // namespace ksupg
