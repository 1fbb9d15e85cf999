#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "ksupg/kinetic.hpp"
#include "ksupg/mesh.hpp"

namespace ksupg {

enum class Equation { Burgers1D, Euler1D, Burgers2D, Euler2D };

const char* to_string(Equation eq);
std::size_t component_count(Equation eq);
int dimension(Equation eq);
bool is_euler(Equation eq);

/// Advection speeds of the scalar equations, c_i(u) = a_i·u + b_i, so the flux is
/// g_i = c_i(u)·u. Defaults give Burgers (c₁ = u/2, c₂ = 1).
struct ScalarFlux {
    double a1 = 0.5;
    double b1 = 0.0;
    double a2 = 0.0;
    double b2 = 1.0;
    double beta = 1.0;

    double c1(double u) const { return a1 * u + b1; }
    double c2(double u) const { return a2 * u + b2; }
    /// Characteristic speeds dg_i/du.
    double speed1(double u) const { return std::abs(2.0 * a1 * u + b1); }
    double speed2(double u) const { return std::abs(2.0 * a2 * u + b2); }

    static ScalarFlux linear(double c1, double c2, double beta = 1.0) { return {0.0, c1, 0.0, c2, beta}; }
};

struct GasModel {
    double gamma = 1.4;
    double R = 1.0;
};

/// Nodal conserved variables, stored node-major: values[i*m + c].
class ConservedField {
public:
    ConservedField(std::shared_ptr<const Mesh> mesh, Equation eq, GasModel gas = {}, ScalarFlux flux = {});

    const Mesh& mesh() const { return *mesh_; }
    std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
    Equation equation() const { return eq_; }
    std::size_t components() const { return m_; }
    std::size_t node_count() const { return mesh_->node_count(); }
    const GasModel& gas() const { return gas_; }
    const ScalarFlux& flux() const { return flux_; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    StateVec node(Index i) const;
    void set_node(Index i, const StateVec& U);
    double component(Index i, std::size_t c) const { return values_[i * m_ + c]; }

    GasState1D gas1d(Index i) const;
    GasState2D gas2d(Index i) const;

    /// Closure moments at node i (throws InvalidState for non-physical Euler states).
    MomentSet moments(Index i) const;

    /// Throws InvalidState when any Euler node has ρ ≤ 0 or p ≤ 0, or any value is non-finite.
    void validate() const;

    /// Primitive quantities used by writers and diagnostics.
    double density(Index i) const;
    double pressure(Index i) const;
    Vec2 velocity(Index i) const;
    double mach(Index i) const;

private:
    std::shared_ptr<const Mesh> mesh_;
    Equation eq_;
    GasModel gas_;
    ScalarFlux flux_;
    std::size_t m_;
    std::vector<double> values_;
};

}  // namespace ksupg
