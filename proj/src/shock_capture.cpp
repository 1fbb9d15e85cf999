#include "ksupg/shock_capture.hpp"

#include <algorithm>
#include <cmath>

#include "ksupg/error.hpp"
#include "ksupg/fem.hpp"

namespace ksupg {

std::vector<double> sensing_values(const ConservedField& field, SensingVariable variable) {
    std::vector<double> psi(field.node_count());
    for (Index i = 0; i < psi.size(); ++i) {
        switch (variable) {
            case SensingVariable::Density: psi[i] = field.density(i); break;
            case SensingVariable::Pressure: psi[i] = field.pressure(i); break;
            case SensingVariable::Temperature: psi[i] = field.pressure(i) / (field.density(i) * field.gas().R); break;
        }
    }
    return psi;
}

std::array<double, 4> element_delta(const Element& el, const Mesh& mesh, const std::array<double, 4>& psi,
                                    double alpha, GradientFrame frame) {
    require(alpha > 1.4 && alpha <= 2.0, ErrorCode::InvalidArgument, "alpha must lie in (1.4, 2]");
    const std::size_t n = node_count(el.kind);
    std::array<double, 4> delta{};
    double pmax = psi[0], pmin = psi[0], pnorm = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        pmax = std::max(pmax, psi[a]);
        pmin = std::min(pmin, psi[a]);
        pnorm = std::max(pnorm, std::abs(psi[a]));
    }
    if (pnorm == 0.0 || pmax == pmin) return delta;

    double grad = 0.0;
    for (const auto& q : quadrature_rule(el.kind).points) {
        double gx = 0.0, gy = 0.0;
        if (frame == GradientFrame::Reference) {
            const ShapeValues s = shape_functions(el.kind, q);
            for (std::size_t a = 0; a < n; ++a) {
                gx += s.dN[a][0] * psi[a];
                gy += s.dN[a][1] * psi[a];
            }
        } else {
            const PhysicalShape s = physical_shape(el, mesh, q);
            for (std::size_t a = 0; a < n; ++a) {
                gx += s.grad[a][0] * psi[a];
                gy += s.grad[a][1] * psi[a];
            }
        }
        grad = std::max({grad, std::abs(gx), std::abs(gy)});
    }

    const double scale = el.h / alpha / pnorm;
    for (std::size_t a = 0; a < n; ++a) {
        const bool extremal = psi[a] == pmax || psi[a] == pmin;
        delta[a] = scale * (extremal ? grad : pmax - psi[a]);
    }
    return delta;
}

std::vector<double> shock_capture_delta(const ConservedField& field, SensingVariable variable, double alpha,
                                        GradientFrame frame) {
    const Mesh& mesh = field.mesh();
    const std::vector<double> psi = sensing_values(field, variable);
    std::vector<double> delta(mesh.node_count(), 0.0);
    for (const auto& el : mesh.elements()) {
        std::array<double, 4> local{};
        const auto verts = el.vertices();
        for (std::size_t a = 0; a < verts.size(); ++a) local[a] = psi[verts[a]];
        const auto d = element_delta(el, mesh, local, alpha, frame);
        for (std::size_t a = 0; a < verts.size(); ++a) delta[verts[a]] = std::max(delta[verts[a]], d[a]);
    }
    return delta;
}

void apply_shock_capturing(CsrMatrix& op, const std::vector<double>& delta, const CsrMatrix& Dx, const CsrMatrix& Dy,
                           std::size_t m) {
    require(Dx.same_pattern(Dy) && delta.size() == Dx.rows() && op.rows() == Dx.rows() * m,
            ErrorCode::DimensionMismatch, "shock capturing operands do not match");
    const auto& off = Dx.offsets();
    const auto& col = Dx.columns();
    for (std::size_t i = 0; i < Dx.rows(); ++i) {
        if (delta[i] == 0.0) continue;
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
            const double v = delta[i] * (Dx.values()[k] + Dy.values()[k]);
            for (std::size_t c = 0; c < m; ++c) {
                const std::size_t slot = op.find(i * m + c, col[k] * m + c);
                require(slot != CsrMatrix::npos, ErrorCode::InvalidArgument, "operator pattern lacks a diffusion entry");
                op.values()[slot] += v;
            }
        }
    }
}

}  // namespace ksupg
