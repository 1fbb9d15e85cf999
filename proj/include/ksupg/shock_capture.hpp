#pragma once

#include <array>
#include <vector>

#include "ksupg/field.hpp"
#include "ksupg/sparse_matrix.hpp"

namespace ksupg {

enum class SensingVariable { Density, Pressure, Temperature };

/// Frame of the element gradient in the sensor. In the reference frame ‖∇Ψ‖∞ ≤ ‖Ψ‖∞ holds
/// on every element; the physical frame scales the gradient by 1/h.
enum class GradientFrame { Reference, Physical };

std::vector<double> sensing_values(const ConservedField& field, SensingVariable variable);

/// Element-local δ. Nodes attaining the element maximum or minimum of Ψ get
/// (h/α)·‖∇Ψ‖∞/‖Ψ‖∞, the others (h/α)·(Ψmax − Ψi)/‖Ψ‖∞.
std::array<double, 4> element_delta(const Element& element, const Mesh& mesh, const std::array<double, 4>& psi,
                                    double alpha, GradientFrame frame = GradientFrame::Reference);

/// Nodal δ, combined across elements by maximum.
std::vector<double> shock_capture_delta(const ConservedField& field, SensingVariable variable, double alpha,
                                        GradientFrame frame = GradientFrame::Reference);

/// Adds δᵢ·(Dx + Dy)ᵢⱼ to every component block of a block operator with m components.
void apply_shock_capturing(CsrMatrix& op, const std::vector<double>& delta, const CsrMatrix& Dx, const CsrMatrix& Dy,
                           std::size_t m);

}  // namespace ksupg
