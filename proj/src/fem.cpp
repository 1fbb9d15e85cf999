#include "ksupg/fem.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ksupg/error.hpp"

namespace ksupg {

namespace {

constexpr double kRefTol = 1e-12;
constexpr std::array<Vec2, 4> kQ4Corners{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}};

LocalMatrix zeros(std::size_t n) {
    return LocalMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

}  // namespace

ShapeValues shape_functions(ElementKind kind, const Vec2& ref) {
    const double xi = ref[0], eta = ref[1];
    ShapeValues s;
    s.count = node_count(kind);
    switch (kind) {
        case ElementKind::L2:
            require(std::abs(xi) <= 1.0 + kRefTol, ErrorCode::InvalidArgument, "point outside reference line");
            s.N[0] = 0.5 * (1.0 - xi);
            s.N[1] = 0.5 * (1.0 + xi);
            s.dN[0] = {-0.5, 0.0};
            s.dN[1] = {0.5, 0.0};
            break;
        case ElementKind::Q4:
            require(std::abs(xi) <= 1.0 + kRefTol && std::abs(eta) <= 1.0 + kRefTol, ErrorCode::InvalidArgument,
                    "point outside reference square");
            for (std::size_t a = 0; a < 4; ++a) {
                const double xa = kQ4Corners[a][0], ya = kQ4Corners[a][1];
                s.N[a] = 0.25 * (1.0 + xi * xa) * (1.0 + eta * ya);
                s.dN[a] = {0.25 * xa * (1.0 + eta * ya), 0.25 * ya * (1.0 + xi * xa)};
            }
            break;
        case ElementKind::T3:
            require(xi >= -kRefTol && eta >= -kRefTol && xi + eta <= 1.0 + kRefTol, ErrorCode::InvalidArgument,
                    "point outside reference triangle");
            s.N = {1.0 - xi - eta, xi, eta, 0.0};
            s.dN = {{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}};
            break;
    }
    return s;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    require(n >= 1, ErrorCode::InvalidArgument, "Gauss rule needs at least one point");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        nodes[static_cast<std::size_t>(k)] = eig.eigenvalues()(k);
        const double v0 = eig.eigenvectors()(0, k);
        weights[static_cast<std::size_t>(k)] = 2.0 * v0 * v0;
    }
}

QuadratureRule quadrature_rule(ElementKind kind) {
    if (kind == ElementKind::T3) {
        const double w = 1.0 / 6.0;
        return {{{0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}}, {w, w, w}};
    }
    return gauss_rule(kind, 2);
}

QuadratureRule gauss_rule(ElementKind kind, int points_per_direction) {
    if (kind == ElementKind::T3) return quadrature_rule(kind);
    std::vector<double> x, w;
    gauss_legendre(points_per_direction, x, w);
    QuadratureRule rule;
    if (kind == ElementKind::L2) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            rule.points.push_back({x[i], 0.0});
            rule.weights.push_back(w[i]);
        }
        return rule;
    }
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t i = 0; i < x.size(); ++i) {
            rule.points.push_back({x[i], x[j]});
            rule.weights.push_back(w[i] * w[j]);
        }
    return rule;
}

PhysicalShape physical_shape(const Element& element, const Mesh& mesh, const Vec2& ref) {
    const ShapeValues s = shape_functions(element.kind, ref);
    PhysicalShape p;
    p.count = s.count;
    p.N = s.N;
    if (element.kind == ElementKind::L2) {
        double dx = 0.0;
        for (std::size_t a = 0; a < 2; ++a) dx += s.dN[a][0] * mesh.node(element.nodes[a]).x;
        require(dx > 0.0, ErrorCode::DegenerateElement,
                "element " + std::to_string(element.id) + " has non-positive Jacobian");
        p.det_j = dx;
        for (std::size_t a = 0; a < 2; ++a) p.grad[a] = {s.dN[a][0] / dx, 0.0};
        return p;
    }
    double j00 = 0.0, j01 = 0.0, j10 = 0.0, j11 = 0.0;
    for (std::size_t a = 0; a < s.count; ++a) {
        const Node& n = mesh.node(element.nodes[a]);
        j00 += s.dN[a][0] * n.x;
        j01 += s.dN[a][1] * n.x;
        j10 += s.dN[a][0] * n.y;
        j11 += s.dN[a][1] * n.y;
    }
    const double det = j00 * j11 - j01 * j10;
    require(det > 0.0, ErrorCode::DegenerateElement,
            "element " + std::to_string(element.id) + " has non-positive Jacobian");
    p.det_j = det;
    // grad_phys = J^{-T} grad_ref
    for (std::size_t a = 0; a < s.count; ++a) {
        const double gx = s.dN[a][0], gy = s.dN[a][1];
        p.grad[a] = {(j11 * gx - j10 * gy) / det, (-j01 * gx + j00 * gy) / det};
    }
    return p;
}

ElementMatrices element_matrices(const Element& element, const Mesh& mesh) {
    return element_matrices(element, mesh, quadrature_rule(element.kind));
}

ElementMatrices element_matrices(const Element& element, const Mesh& mesh, const QuadratureRule& rule) {
    const std::size_t n = node_count(element.kind);
    ElementMatrices em{zeros(n), zeros(n), zeros(n), zeros(n), zeros(n), zeros(n), zeros(n)};
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const PhysicalShape p = physical_shape(element, mesh, rule.points[q]);
        const double w = rule.weights[q] * p.det_j;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const auto i = static_cast<Eigen::Index>(a), j = static_cast<Eigen::Index>(b);
                em.M(i, j) += w * p.N[a] * p.N[b];
                em.Cx(i, j) += w * p.N[a] * p.grad[b][0];
                em.Cy(i, j) += w * p.N[a] * p.grad[b][1];
                em.Dx(i, j) += w * p.grad[a][0] * p.grad[b][0];
                em.Dxy(i, j) += w * p.grad[a][0] * p.grad[b][1];
                em.Dyx(i, j) += w * p.grad[a][1] * p.grad[b][0];
                em.Dy(i, j) += w * p.grad[a][1] * p.grad[b][1];
            }
    }
    return em;
}

AssemblyPattern::AssemblyPattern(const Mesh& mesh) {
    const auto adjacency = mesh.node_neighbors();
    const std::size_t n = mesh.node_count();
    std::vector<std::size_t> offsets(n + 1, 0), columns;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Index> row = adjacency[i];
        row.insert(std::lower_bound(row.begin(), row.end(), i), i);
        columns.insert(columns.end(), row.begin(), row.end());
        offsets[i + 1] = columns.size();
    }
    const std::size_t total = columns.size();
    pattern_ = CsrMatrix(n, n, std::move(offsets), std::move(columns), std::vector<double>(total, 0.0));
    scatter_.resize(mesh.element_count());
    for (const auto& el : mesh.elements()) {
        auto& map = scatter_[el.id];
        map.fill(CsrMatrix::npos);
        const auto verts = el.vertices();
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = 0; b < verts.size(); ++b) map[a * 4 + b] = pattern_.find(verts[a], verts[b]);
    }
}

namespace {

const LocalMatrix& pick(const ElementMatrices& em, MatrixKind kind) {
    switch (kind) {
        case MatrixKind::M: return em.M;
        case MatrixKind::Cx: return em.Cx;
        case MatrixKind::Cy: return em.Cy;
        case MatrixKind::Dx: return em.Dx;
        case MatrixKind::Dxy: return em.Dxy;
        case MatrixKind::Dyx: return em.Dyx;
        case MatrixKind::Dy: return em.Dy;
    }
    return em.M;
}

void scatter(CsrMatrix& target, const AssemblyPattern& pattern, const Element& el, const LocalMatrix& local,
             double weight) {
    auto& values = target.values();
    const std::size_t n = node_count(el.kind);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            values[pattern.slot(el.id, a, b)] += weight * local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
}

}  // namespace

CsrMatrix assemble(const Mesh& mesh, MatrixKind kind, bool weight_half_h) {
    return assemble(mesh, AssemblyPattern(mesh), kind, weight_half_h);
}

CsrMatrix assemble(const Mesh& mesh, const AssemblyPattern& pattern, MatrixKind kind, bool weight_half_h) {
    CsrMatrix out = pattern.zero();
    for (const auto& el : mesh.elements()) {
        const ElementMatrices em = element_matrices(el, mesh);
        scatter(out, pattern, el, pick(em, kind), weight_half_h ? 0.5 * el.h : 1.0);
    }
    return out;
}

GlobalOperators assemble_operators(const Mesh& mesh, const AssemblyPattern& pattern) {
    GlobalOperators ops;
    for (CsrMatrix* m : {&ops.M, &ops.Cx, &ops.Cy, &ops.Dx, &ops.Dxy, &ops.Dyx, &ops.Dy, &ops.HDx, &ops.HDxy,
                         &ops.HDyx, &ops.HDy})
        *m = pattern.zero();
    for (const auto& el : mesh.elements()) {
        const ElementMatrices em = element_matrices(el, mesh);
        const double hh = 0.5 * el.h;
        scatter(ops.M, pattern, el, em.M, 1.0);
        scatter(ops.Cx, pattern, el, em.Cx, 1.0);
        scatter(ops.Cy, pattern, el, em.Cy, 1.0);
        scatter(ops.Dx, pattern, el, em.Dx, 1.0);
        scatter(ops.Dxy, pattern, el, em.Dxy, 1.0);
        scatter(ops.Dyx, pattern, el, em.Dyx, 1.0);
        scatter(ops.Dy, pattern, el, em.Dy, 1.0);
        scatter(ops.HDx, pattern, el, em.Dx, hh);
        scatter(ops.HDxy, pattern, el, em.Dxy, hh);
        scatter(ops.HDyx, pattern, el, em.Dyx, hh);
        scatter(ops.HDy, pattern, el, em.Dy, hh);
    }
    ops.lumped_mass.assign(mesh.node_count(), 0.0);
    const auto& off = ops.M.offsets();
    for (std::size_t i = 0; i < mesh.node_count(); ++i)
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) ops.lumped_mass[i] += ops.M.values()[k];
    return ops;
}

}  // namespace ksupg
