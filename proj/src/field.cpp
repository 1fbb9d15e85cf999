#include "ksupg/field.hpp"

#include <cmath>

#include "ksupg/error.hpp"

namespace ksupg {

const char* to_string(Equation eq) {
    switch (eq) {
        case Equation::Burgers1D: return "burgers1d";
        case Equation::Euler1D: return "euler1d";
        case Equation::Burgers2D: return "burgers2d";
        case Equation::Euler2D: return "euler2d";
    }
    return "?";
}

std::size_t component_count(Equation eq) {
    switch (eq) {
        case Equation::Burgers1D:
        case Equation::Burgers2D: return 1;
        case Equation::Euler1D: return 3;
        case Equation::Euler2D: return 4;
    }
    return 0;
}

int dimension(Equation eq) { return eq == Equation::Burgers1D || eq == Equation::Euler1D ? 1 : 2; }
bool is_euler(Equation eq) { return eq == Equation::Euler1D || eq == Equation::Euler2D; }

ConservedField::ConservedField(std::shared_ptr<const Mesh> mesh, Equation eq, GasModel gas, ScalarFlux flux)
    : mesh_(std::move(mesh)), eq_(eq), gas_(gas), flux_(flux), m_(component_count(eq)) {
    require(mesh_ != nullptr, ErrorCode::InvalidArgument, "field needs a mesh");
    require(mesh_->dim() == dimension(eq), ErrorCode::DimensionMismatch, "equation and mesh dimension differ");
    require(flux_.beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
    values_.assign(mesh_->node_count() * m_, 0.0);
}

StateVec ConservedField::node(Index i) const {
    StateVec U(static_cast<Eigen::Index>(m_));
    for (std::size_t c = 0; c < m_; ++c) U(static_cast<Eigen::Index>(c)) = values_[i * m_ + c];
    return U;
}

void ConservedField::set_node(Index i, const StateVec& U) {
    require(static_cast<std::size_t>(U.size()) == m_, ErrorCode::DimensionMismatch, "state has the wrong size");
    for (std::size_t c = 0; c < m_; ++c) values_[i * m_ + c] = U(static_cast<Eigen::Index>(c));
}

GasState1D ConservedField::gas1d(Index i) const { return GasState1D::from_conserved(node(i), gas_.gamma, gas_.R); }
GasState2D ConservedField::gas2d(Index i) const { return GasState2D::from_conserved(node(i), gas_.gamma, gas_.R); }

MomentSet ConservedField::moments(Index i) const {
    switch (eq_) {
        case Equation::Burgers1D: {
            const double u = values_[i];
            return scalar1d_moments(u, flux_.c1(u), flux_.beta);
        }
        case Equation::Burgers2D: {
            const double u = values_[i];
            return scalar2d_moments(u, flux_.c1(u), flux_.c2(u), flux_.beta);
        }
        case Equation::Euler1D: return euler1d_moments(gas1d(i));
        case Equation::Euler2D: return euler2d_moments(gas2d(i));
    }
    fail(ErrorCode::InvalidArgument, "unknown equation");
}

void ConservedField::validate() const {
    for (double v : values_) require(std::isfinite(v), ErrorCode::InvalidState, "non-finite value in field");
    if (!is_euler(eq_)) return;
    for (Index i = 0; i < node_count(); ++i) {
        try {
            if (eq_ == Equation::Euler1D)
                (void)gas1d(i);
            else
                (void)gas2d(i);
        } catch (const Error& e) {
            fail(ErrorCode::InvalidState, "node " + std::to_string(i) + ": " + e.what());
        }
    }
}

double ConservedField::density(Index i) const { return values_[i * m_]; }

double ConservedField::pressure(Index i) const {
    switch (eq_) {
        case Equation::Euler1D: {
            const double rho = values_[i * 3], mu = values_[i * 3 + 1], e = values_[i * 3 + 2];
            return (gas_.gamma - 1.0) * (e - 0.5 * mu * mu / rho);
        }
        case Equation::Euler2D: {
            const double rho = values_[i * 4], m1 = values_[i * 4 + 1], m2 = values_[i * 4 + 2], e = values_[i * 4 + 3];
            return (gas_.gamma - 1.0) * (e - 0.5 * (m1 * m1 + m2 * m2) / rho);
        }
        default: return 0.0;
    }
}

Vec2 ConservedField::velocity(Index i) const {
    switch (eq_) {
        case Equation::Euler1D: return {values_[i * 3 + 1] / values_[i * 3], 0.0};
        case Equation::Euler2D: return {values_[i * 4 + 1] / values_[i * 4], values_[i * 4 + 2] / values_[i * 4]};
        default: {
            const double u = values_[i];
            return {flux_.c1(u), dimension(eq_) == 2 ? flux_.c2(u) : 0.0};
        }
    }
}

double ConservedField::mach(Index i) const {
    if (!is_euler(eq_)) return 0.0;
    const Vec2 v = velocity(i);
    const double a = std::sqrt(gas_.gamma * pressure(i) / density(i));
    return std::hypot(v[0], v[1]) / a;
}

}  // namespace ksupg
