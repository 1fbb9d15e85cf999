#pragma once

/**
 * @file fem.hpp
 * @brief Shape functions, Gauss rules, element matrices and global scalar assembly.
 *
 * Reference elements: L2 on [-1, 1], Q4 on [-1, 1]^2 with counter-clockwise corners
 * starting at (-1, -1), T3 on the unit triangle (0,0), (1,0), (0,1).
 */

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "ksupg/mesh.hpp"
#include "ksupg/sparse_matrix.hpp"

namespace ksupg {

using LocalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

struct ShapeValues {
    std::size_t count = 0;
    std::array<double, 4> N{};
    std::array<Vec2, 4> dN{};  // reference gradients
};

/// Throws InvalidArgument when the point lies outside the reference element by more than 1e-12.
ShapeValues shape_functions(ElementKind kind, const Vec2& ref);

struct QuadratureRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
};

/// Full integration: 2-point Gauss (L2), 2x2 Gauss (Q4), 3-point edge-midpoint rule (T3).
QuadratureRule quadrature_rule(ElementKind kind);

/// Golub-Welsch Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// n-point Gauss-Legendre per direction for L2/Q4 (used for cross-checks). T3 returns the default rule.
QuadratureRule gauss_rule(ElementKind kind, int points_per_direction);

/// Shape data mapped to the physical element at one reference point.
struct PhysicalShape {
    std::size_t count = 0;
    std::array<double, 4> N{};
    std::array<Vec2, 4> grad{};
    double det_j = 0.0;
};

/// Throws DegenerateElement on a non-positive Jacobian determinant.
PhysicalShape physical_shape(const Element& element, const Mesh& mesh, const Vec2& ref);

/// M = ∫NᵀN, Cx = ∫Nᵀ∂ₓN, Cy = ∫Nᵀ∂ᵧN, Dx = ∫∂ₓNᵀ∂ₓN, Dxy = ∫∂ₓNᵀ∂ᵧN, Dyx = ∫∂ᵧNᵀ∂ₓN = Dxyᵀ,
/// Dy = ∫∂ᵧNᵀ∂ᵧN. For L2 elements Cx and Dx carry C and D; the y matrices are zero.
struct ElementMatrices {
    LocalMatrix M, Cx, Cy, Dx, Dxy, Dyx, Dy;
};

ElementMatrices element_matrices(const Element& element, const Mesh& mesh);
ElementMatrices element_matrices(const Element& element, const Mesh& mesh, const QuadratureRule& rule);

enum class MatrixKind { M, Cx, Cy, Dx, Dxy, Dyx, Dy };

/// Node-adjacency CSR pattern plus, per element, the value index of every local (a, b) pair.
class AssemblyPattern {
public:
    explicit AssemblyPattern(const Mesh& mesh);

    const CsrMatrix& pattern() const { return pattern_; }
    /// Value slot of local entry (a, b) of element e.
    std::size_t slot(Index e, std::size_t a, std::size_t b) const { return scatter_[e][a * 4 + b]; }
    CsrMatrix zero() const { return pattern_; }

private:
    CsrMatrix pattern_;
    std::vector<std::array<std::size_t, 16>> scatter_;
};

/// Scatter-adds one element matrix kind. With `weight_half_h` each element contributes (h_e/2)·A_e.
CsrMatrix assemble(const Mesh& mesh, MatrixKind kind, bool weight_half_h = false);
CsrMatrix assemble(const Mesh& mesh, const AssemblyPattern& pattern, MatrixKind kind, bool weight_half_h = false);

/// Every global scalar operator the KSUPG scheme uses, on one shared pattern.
/// The HD matrices carry the per-element h_e/2 weight.
struct GlobalOperators {
    CsrMatrix M, Cx, Cy, Dx, Dxy, Dyx, Dy;
    CsrMatrix HDx, HDxy, HDyx, HDy;
    std::vector<double> lumped_mass;
};

GlobalOperators assemble_operators(const Mesh& mesh, const AssemblyPattern& pattern);

}  // namespace ksupg
