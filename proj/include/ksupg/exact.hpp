#pragma once

/**
 * @file exact.hpp
 * @brief Reference solutions: the Euler Riemann problem, the steady 2D Burgers problem on the
 * unit square, attached oblique shocks and a bow-shock standoff correlation. Also the shock
 * angle measurement applied to computed fields.
 */

#include <optional>

#include "ksupg/field.hpp"
#include "ksupg/kinetic.hpp"

namespace ksupg {

/// Exact solution of the 1D Riemann problem for a polytropic gas.
class RiemannSolution {
public:
    /// Throws VacuumFormation when the initial data generate a vacuum, InvalidArgument when γ differs.
    RiemannSolution(const GasState1D& left, const GasState1D& right);

    double p_star() const { return p_star_; }
    double u_star() const { return u_star_; }
    double rho_star_left() const { return rho_star_l_; }
    double rho_star_right() const { return rho_star_r_; }

    /// State at similarity coordinate x/t.
    GasState1D sample(double x_over_t) const;

private:
    GasState1D l_, r_;
    double p_star_ = 0.0, u_star_ = 0.0, rho_star_l_ = 0.0, rho_star_r_ = 0.0;
};

GasState1D exact_riemann(const GasState1D& left, const GasState1D& right, double x_over_t);

/// Steady u_x(u²/2) + u_y = 0 on [0,1]² with u(0,y) = 1, u(1,y) = −1, u(x,0) = 1 − 2x.
/// Characteristics from the bottom give u = (1 − 2x)/(1 − 2y) for y < 1/2 inside the fan
/// |x − 1/2| < 1/2 − y; the side states fill the rest and meet at the shock x = 1/2, y ≥ 1/2.
double burgers2d_exact(double x, double y);

struct ObliqueShock {
    double beta = 0.0;  // shock angle to the upstream flow, radians
    double pressure_ratio = 1.0;
    double density_ratio = 1.0;
    double mach_after = 0.0;
};

/// Weak-branch solution of the θ–β–M relation. θ in radians. Throws DetachedShock when θ
/// exceeds the maximum deflection for this Mach number.
ObliqueShock oblique_shock_oracle(double mach, double deflection, double gamma = 1.4);

/// Regular reflection of an oblique shock from a flat wall parallel to the upstream flow.
struct ShockReflection {
    ObliqueShock incident;
    ObliqueShock reflected;
    double p2_over_p1 = 1.0;  // behind the incident shock
    double p3_over_p1 = 1.0;  // behind the reflected shock
};

ShockReflection two_shock_reflection(double mach, double deflection, double gamma = 1.4);

/// Bow-shock standoff distance over cylinder radius, Δ/R = 0.386·exp(4.67/M²).
double billig_standoff(double mach);

/// Axis-aligned region of the domain.
struct Window {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;
};

/// Nodal ‖∇p‖ from element gradients, averaged over the elements around each node.
std::vector<double> pressure_gradient_magnitude(const ConservedField& field);

/// Angle in degrees between the wall (the x axis) and the line fitted through, for each
/// column of nodes inside the window, the node of largest pressure gradient. Columns whose
/// peak is below 3× the median gradient in the window (or at roundoff level) are skipped.
/// Throws NoShockDetected when fewer than three columns remain.
double measure_shock_angle(const ConservedField& field, const Window& window);

}  // namespace ksupg
