#pragma once

/**
 * @file mesh.hpp
 * @brief Line, quadrilateral and triangle meshes with tagged boundary node sets.
 *
 * Structured builders produce counter-clockwise elements and one boundary set per
 * side. Unstructured triangle meshes are read from a plain-text format:
 *
 *   nnodes nelems nbsets
 *   id x y                 (nnodes lines)
 *   id n1 n2 n3            (nelems lines)
 *   tagname count          (per boundary set, followed by count lines)
 *   node_id nx ny
 *
 * Indices are 0-based, tokens are whitespace separated and lines starting with
 * `#` are comments.
 */

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ksupg {

using Index = std::size_t;
using Vec2 = std::array<double, 2>;

enum class ElementKind { L2, Q4, T3 };

constexpr std::size_t node_count(ElementKind kind) {
    switch (kind) {
        case ElementKind::L2: return 2;
        case ElementKind::Q4: return 4;
        case ElementKind::T3: return 3;
    }
    return 0;
}

const char* to_string(ElementKind kind);

enum class BoundaryTag { Dirichlet, Neumann, Wall, SupersonicInflow, SupersonicOutflow };

const char* to_string(BoundaryTag tag);
/// Case-insensitive; throws ParseError on unknown names.
BoundaryTag parse_boundary_tag(std::string_view name);

struct Node {
    Index id = 0;
    double x = 0.0;
    double y = 0.0;
};

struct Element {
    Index id = 0;
    ElementKind kind = ElementKind::L2;
    std::array<Index, 4> nodes{};
    double h = 0.0;

    std::span<const Index> vertices() const { return {nodes.data(), node_count(kind)}; }
};

/// Nodes carrying one boundary condition. In 2D every node has a unit outward normal.
struct BoundarySet {
    std::string name;
    BoundaryTag tag = BoundaryTag::Neumann;
    std::vector<Index> nodes;
    std::vector<Vec2> normals;
};

struct Rect {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;
};

class Mesh {
public:
    /// Validates connectivity, normalizes orientation of T3 elements and computes element sizes.
    Mesh(int dim, std::vector<Node> nodes, std::vector<Element> elements,
         std::vector<BoundarySet> boundaries);

    int dim() const { return dim_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<BoundarySet>& boundaries() const { return boundaries_; }
    Index node_count() const { return nodes_.size(); }
    Index element_count() const { return elements_.size(); }

    const Node& node(Index i) const { return nodes_[i]; }
    const Element& element(Index e) const { return elements_[e]; }

    /// nullptr when no set has this name.
    const BoundarySet* find_boundary(std::string_view name) const;

    /// Copy of this mesh with the named boundary sets re-tagged.
    Mesh retagged(const std::map<std::string, BoundaryTag>& tags) const;

    /// Length (L2) or area (Q4, T3) of an element.
    double element_measure(Index e) const;

    /// Sorted node neighbours (nodes sharing an element), excluding the node itself.
    std::vector<std::vector<Index>> node_neighbors() const;

    /// Element edges used by exactly one element, as node pairs with their owning element.
    struct BoundaryEdge {
        Index a;
        Index b;
        Index element;
    };
    std::vector<BoundaryEdge> boundary_edges() const;

private:
    int dim_;
    std::vector<Node> nodes_;
    std::vector<Element> elements_;
    std::vector<BoundarySet> boundaries_;
};

/// n_nodes equispaced nodes on [x0, x1]; boundary sets "left" and "right".
Mesh build_line_mesh(Index n_nodes, double x0, double x1);

/// nx*ny Q4 elements on a rectangle; boundary sets "bottom", "right", "top", "left".
Mesh build_structured_quad_mesh(Index nx, Index ny, const Rect& domain);

/// Each structured cell split into two T3 elements along alternating diagonals.
/// Interior nodes may be jittered by `perturbation` times the cell size (deterministic in `seed`).
Mesh build_structured_tri_mesh(Index nx, Index ny, const Rect& domain, double perturbation = 0.0,
                               unsigned seed = 0);

/// Left half annulus r_in <= r <= r_out with Q4 elements: n_theta along the arc, n_r radially.
/// Boundary sets "inflow" (outer arc), "wall" (inner arc), "outflow_top", "outflow_bottom".
Mesh build_half_cylinder_mesh(Index n_theta, Index n_r, double r_in, double r_out);

Mesh load_triangle_mesh(const std::filesystem::path& path);
Mesh parse_triangle_mesh(std::istream& in);
void write_triangle_mesh(const Mesh& mesh, const std::filesystem::path& path);

/// Minimum edge length (element length for L2). Throws DegenerateElement below 1e-14.
double element_size(const Element& element, const Mesh& mesh);

/// Outward unit normals for a node set: average of the outward normals of the boundary
/// edges whose endpoints both lie in the set, renormalized. 1D sets get (-1,0) or (+1,0).
std::vector<Vec2> boundary_normals(const Mesh& mesh, std::span<const Index> set_nodes);

}  // namespace ksupg
