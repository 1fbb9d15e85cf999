#include "ksupg/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "ksupg/error.hpp"

namespace ksupg {

namespace {

constexpr double kMinEdge = 1e-14;

double cross(const Node& o, const Node& a, const Node& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance(const Node& a, const Node& b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Makes 2D element vertex order counter-clockwise; throws when the element is degenerate
// or (for Q4) not convex.
void orient_counter_clockwise(Element& el, const std::vector<Node>& nodes) {
    auto v = [&](std::size_t k) -> const Node& { return nodes[el.nodes[k]]; };
    if (el.kind == ElementKind::T3) {
        double twice_area = cross(v(0), v(1), v(2));
        if (twice_area < 0.0) std::swap(el.nodes[1], el.nodes[2]);
        if (std::abs(twice_area) < kMinEdge * kMinEdge)
            fail(ErrorCode::DegenerateElement, "triangle " + std::to_string(el.id) + " has zero area");
        return;
    }
    if (el.kind == ElementKind::Q4) {
        auto corner_signs = [&]() {
            int pos = 0, neg = 0;
            for (std::size_t k = 0; k < 4; ++k) {
                double c = cross(v(k), v((k + 1) % 4), v((k + 3) % 4));
                if (c > 0.0) ++pos;
                if (c < 0.0) ++neg;
            }
            return std::pair{pos, neg};
        };
        auto [pos, neg] = corner_signs();
        if (neg == 4) {
            std::swap(el.nodes[1], el.nodes[3]);
            std::tie(pos, neg) = corner_signs();
        }
        if (pos != 4)
            fail(ErrorCode::DegenerateElement,
                 "quadrilateral " + std::to_string(el.id) + " is not convex counter-clockwise");
    }
}

std::uint64_t edge_key(Index a, Index b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

const char* to_string(ElementKind kind) {
    switch (kind) {
        case ElementKind::L2: return "L2";
        case ElementKind::Q4: return "Q4";
        case ElementKind::T3: return "T3";
    }
    return "?";
}

const char* to_string(BoundaryTag tag) {
    switch (tag) {
        case BoundaryTag::Dirichlet: return "Dirichlet";
        case BoundaryTag::Neumann: return "Neumann";
        case BoundaryTag::Wall: return "Wall";
        case BoundaryTag::SupersonicInflow: return "SupersonicInflow";
        case BoundaryTag::SupersonicOutflow: return "SupersonicOutflow";
    }
    return "?";
}

BoundaryTag parse_boundary_tag(std::string_view name) {
    const std::string key = lower(name);
    for (auto tag : {BoundaryTag::Dirichlet, BoundaryTag::Neumann, BoundaryTag::Wall,
                     BoundaryTag::SupersonicInflow, BoundaryTag::SupersonicOutflow}) {
        if (lower(to_string(tag)) == key) return tag;
    }
    fail(ErrorCode::ParseError, "unknown boundary tag '" + std::string(name) + "'");
}

Mesh::Mesh(int dim, std::vector<Node> nodes, std::vector<Element> elements,
           std::vector<BoundarySet> boundaries)
    : dim_(dim), nodes_(std::move(nodes)), elements_(std::move(elements)),
      boundaries_(std::move(boundaries)) {
    require(dim_ == 1 || dim_ == 2, ErrorCode::InvalidArgument, "mesh dimension must be 1 or 2");
    for (Index i = 0; i < nodes_.size(); ++i) {
        require(nodes_[i].id == i, ErrorCode::TopologyError, "node ids must be contiguous from 0");
        require(std::isfinite(nodes_[i].x) && std::isfinite(nodes_[i].y), ErrorCode::InvalidArgument,
                "node " + std::to_string(i) + " has non-finite coordinates");
    }
    for (Index e = 0; e < elements_.size(); ++e) {
        Element& el = elements_[e];
        el.id = e;
        const bool kind_ok = dim_ == 1 ? el.kind == ElementKind::L2 : el.kind != ElementKind::L2;
        require(kind_ok, ErrorCode::InvalidArgument, "element kind does not match mesh dimension");
        for (Index n : el.vertices()) {
            require(n < nodes_.size(), ErrorCode::TopologyError,
                    "element " + std::to_string(e) + " references missing node " + std::to_string(n));
        }
        if (dim_ == 2) orient_counter_clockwise(el, nodes_);
        el.h = element_size(el, *this);
    }

    std::vector<char> on_boundary(nodes_.size(), dim_ == 1 ? 1 : 0);
    if (dim_ == 2) {
        for (const auto& edge : boundary_edges()) on_boundary[edge.a] = on_boundary[edge.b] = 1;
    }
    for (auto& set : boundaries_) {
        for (Index n : set.nodes) {
            require(n < nodes_.size(), ErrorCode::TopologyError,
                    "boundary set '" + set.name + "' references missing node " + std::to_string(n));
            require(on_boundary[n] != 0, ErrorCode::TopologyError,
                    "boundary set '" + set.name + "' node " + std::to_string(n) +
                        " is not on the domain boundary");
        }
        if (set.normals.empty()) {
            set.normals = boundary_normals(*this, set.nodes);
        } else {
            require(set.normals.size() == set.nodes.size(), ErrorCode::InvalidArgument,
                    "boundary set '" + set.name + "' normal count mismatch");
            for (auto& n : set.normals) {
                double len = std::hypot(n[0], n[1]);
                require(len > 0.0, ErrorCode::InvalidArgument,
                        "boundary set '" + set.name + "' has a zero normal");
                n = {n[0] / len, n[1] / len};
            }
        }
    }
}

const BoundarySet* Mesh::find_boundary(std::string_view name) const {
    for (const auto& set : boundaries_)
        if (set.name == name) return &set;
    return nullptr;
}

Mesh Mesh::retagged(const std::map<std::string, BoundaryTag>& tags) const {
    Mesh copy = *this;
    for (const auto& [name, tag] : tags) {
        auto it = std::find_if(copy.boundaries_.begin(), copy.boundaries_.end(),
                               [&](const BoundarySet& s) { return s.name == name; });
        require(it != copy.boundaries_.end(), ErrorCode::MissingTag, "no boundary set named '" + name + "'");
        it->tag = tag;
    }
    return copy;
}

double Mesh::element_measure(Index e) const {
    const Element& el = elements_[e];
    auto v = [&](std::size_t k) -> const Node& { return nodes_[el.nodes[k]]; };
    switch (el.kind) {
        case ElementKind::L2: return std::abs(v(1).x - v(0).x);
        case ElementKind::T3: return 0.5 * cross(v(0), v(1), v(2));
        case ElementKind::Q4: return 0.5 * (cross(v(0), v(1), v(2)) + cross(v(0), v(2), v(3)));
    }
    return 0.0;
}

std::vector<std::vector<Index>> Mesh::node_neighbors() const {
    std::vector<std::vector<Index>> adj(nodes_.size());
    for (const auto& el : elements_) {
        for (Index a : el.vertices())
            for (Index b : el.vertices())
                if (a != b) adj[a].push_back(b);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

std::vector<Mesh::BoundaryEdge> Mesh::boundary_edges() const {
    std::map<std::uint64_t, std::pair<int, BoundaryEdge>> count;
    for (const auto& el : elements_) {
        if (el.kind == ElementKind::L2) continue;
        const auto verts = el.vertices();
        for (std::size_t k = 0; k < verts.size(); ++k) {
            Index a = verts[k], b = verts[(k + 1) % verts.size()];
            auto& entry = count[edge_key(a, b)];
            entry.first += 1;
            entry.second = BoundaryEdge{a, b, el.id};
        }
    }
    std::vector<BoundaryEdge> edges;
    for (const auto& [key, entry] : count)
        if (entry.first == 1) edges.push_back(entry.second);
    return edges;
}

double element_size(const Element& element, const Mesh& mesh) {
    const auto verts = element.vertices();
    double h = std::numeric_limits<double>::infinity();
    if (element.kind == ElementKind::L2) {
        h = std::abs(mesh.node(verts[1]).x - mesh.node(verts[0]).x);
    } else {
        for (std::size_t k = 0; k < verts.size(); ++k)
            h = std::min(h, distance(mesh.node(verts[k]), mesh.node(verts[(k + 1) % verts.size()])));
    }
    if (!(h >= kMinEdge))
        fail(ErrorCode::DegenerateElement, "element " + std::to_string(element.id) + " has an edge shorter than 1e-14");
    return h;
}

std::vector<Vec2> boundary_normals(const Mesh& mesh, std::span<const Index> set_nodes) {
    std::vector<Vec2> normals(set_nodes.size(), Vec2{0.0, 0.0});
    if (mesh.dim() == 1) {
        double xmin = mesh.node(0).x, xmax = mesh.node(0).x;
        for (const auto& n : mesh.nodes()) {
            xmin = std::min(xmin, n.x);
            xmax = std::max(xmax, n.x);
        }
        for (std::size_t k = 0; k < set_nodes.size(); ++k) {
            double x = mesh.node(set_nodes[k]).x;
            normals[k] = {std::abs(x - xmin) <= std::abs(x - xmax) ? -1.0 : 1.0, 0.0};
        }
        return normals;
    }

    std::map<Index, std::size_t> slot;
    for (std::size_t k = 0; k < set_nodes.size(); ++k) slot[set_nodes[k]] = k;
    for (const auto& edge : mesh.boundary_edges()) {
        auto ia = slot.find(edge.a), ib = slot.find(edge.b);
        if (ia == slot.end() || ib == slot.end()) continue;
        const Node& a = mesh.node(edge.a);
        const Node& b = mesh.node(edge.b);
        Vec2 n{b.y - a.y, -(b.x - a.x)};
        double len = std::hypot(n[0], n[1]);
        n = {n[0] / len, n[1] / len};
        // orient away from the owning element's centroid
        double cx = 0.0, cy = 0.0;
        const auto verts = mesh.element(edge.element).vertices();
        for (Index v : verts) {
            cx += mesh.node(v).x;
            cy += mesh.node(v).y;
        }
        cx /= static_cast<double>(verts.size());
        cy /= static_cast<double>(verts.size());
        if (n[0] * (0.5 * (a.x + b.x) - cx) + n[1] * (0.5 * (a.y + b.y) - cy) < 0.0) n = {-n[0], -n[1]};
        for (auto it : {ia, ib}) {
            normals[it->second][0] += n[0];
            normals[it->second][1] += n[1];
        }
    }
    for (std::size_t k = 0; k < normals.size(); ++k) {
        double len = std::hypot(normals[k][0], normals[k][1]);
        require(len > 1e-12, ErrorCode::TopologyError,
                "boundary node " + std::to_string(set_nodes[k]) + " has no boundary edge inside its set");
        normals[k] = {normals[k][0] / len, normals[k][1] / len};
    }
    return normals;
}

Mesh build_line_mesh(Index n_nodes, double x0, double x1) {
    require(n_nodes >= 2, ErrorCode::InvalidArgument, "line mesh needs at least 2 nodes");
    require(x1 > x0, ErrorCode::InvalidArgument, "line mesh needs x1 > x0");
    std::vector<Node> nodes(n_nodes);
    const double h = (x1 - x0) / static_cast<double>(n_nodes - 1);
    for (Index i = 0; i < n_nodes; ++i) nodes[i] = {i, i + 1 == n_nodes ? x1 : x0 + h * static_cast<double>(i), 0.0};
    std::vector<Element> elements(n_nodes - 1);
    for (Index e = 0; e + 1 < n_nodes; ++e) elements[e] = {e, ElementKind::L2, {e, e + 1, 0, 0}, 0.0};
    std::vector<BoundarySet> sets{{"left", BoundaryTag::Neumann, {0}, {{-1.0, 0.0}}},
                                  {"right", BoundaryTag::Neumann, {n_nodes - 1}, {{1.0, 0.0}}}};
    return Mesh(1, std::move(nodes), std::move(elements), std::move(sets));
}

Mesh build_structured_quad_mesh(Index nx, Index ny, const Rect& domain) {
    require(nx >= 1 && ny >= 1, ErrorCode::InvalidArgument, "quad mesh needs at least one element per direction");
    require(domain.x1 > domain.x0 && domain.y1 > domain.y0, ErrorCode::InvalidArgument, "empty rectangle");
    auto id = [nx](Index i, Index j) { return j * (nx + 1) + i; };
    std::vector<Node> nodes;
    nodes.reserve((nx + 1) * (ny + 1));
    for (Index j = 0; j <= ny; ++j)
        for (Index i = 0; i <= nx; ++i) {
            double x = i == nx ? domain.x1 : domain.x0 + (domain.x1 - domain.x0) * static_cast<double>(i) / static_cast<double>(nx);
            double y = j == ny ? domain.y1 : domain.y0 + (domain.y1 - domain.y0) * static_cast<double>(j) / static_cast<double>(ny);
            nodes.push_back({id(i, j), x, y});
        }
    std::vector<Element> elements;
    elements.reserve(nx * ny);
    for (Index j = 0; j < ny; ++j)
        for (Index i = 0; i < nx; ++i)
            elements.push_back({elements.size(), ElementKind::Q4,
                                {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)}, 0.0});
    BoundarySet bottom{"bottom", BoundaryTag::Neumann, {}, {}}, right{"right", BoundaryTag::Neumann, {}, {}},
        top{"top", BoundaryTag::Neumann, {}, {}}, left{"left", BoundaryTag::Neumann, {}, {}};
    for (Index i = 0; i <= nx; ++i) {
        bottom.nodes.push_back(id(i, 0));
        top.nodes.push_back(id(i, ny));
    }
    for (Index j = 0; j <= ny; ++j) {
        left.nodes.push_back(id(0, j));
        right.nodes.push_back(id(nx, j));
    }
    return Mesh(2, std::move(nodes), std::move(elements), {bottom, right, top, left});
}

Mesh build_structured_tri_mesh(Index nx, Index ny, const Rect& domain, double perturbation, unsigned seed) {
    Mesh quads = build_structured_quad_mesh(nx, ny, domain);
    std::vector<Node> nodes = quads.nodes();
    if (perturbation > 0.0) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> jitter(-perturbation, perturbation);
        const double dx = (domain.x1 - domain.x0) / static_cast<double>(nx);
        const double dy = (domain.y1 - domain.y0) / static_cast<double>(ny);
        for (Index j = 1; j < ny; ++j)
            for (Index i = 1; i < nx; ++i) {
                Node& n = nodes[j * (nx + 1) + i];
                n.x += jitter(rng) * dx;
                n.y += jitter(rng) * dy;
            }
    }
    std::vector<Element> elements;
    elements.reserve(2 * nx * ny);
    for (const auto& q : quads.elements()) {
        const auto& v = q.nodes;
        const Index i = q.id % nx, j = q.id / nx;
        if ((i + j) % 2 == 0) {
            elements.push_back({elements.size(), ElementKind::T3, {v[0], v[1], v[2], 0}, 0.0});
            elements.push_back({elements.size(), ElementKind::T3, {v[0], v[2], v[3], 0}, 0.0});
        } else {
            elements.push_back({elements.size(), ElementKind::T3, {v[0], v[1], v[3], 0}, 0.0});
            elements.push_back({elements.size(), ElementKind::T3, {v[1], v[2], v[3], 0}, 0.0});
        }
    }
    std::vector<BoundarySet> sets;
    for (const auto& s : quads.boundaries()) sets.push_back({s.name, s.tag, s.nodes, {}});
    return Mesh(2, std::move(nodes), std::move(elements), std::move(sets));
}

Mesh build_half_cylinder_mesh(Index n_theta, Index n_r, double r_in, double r_out) {
    require(n_theta >= 1 && n_r >= 1, ErrorCode::InvalidArgument, "half-cylinder mesh needs positive counts");
    require(r_in > 0.0 && r_out > r_in, ErrorCode::InvalidArgument, "half-cylinder mesh needs 0 < r_in < r_out");
    auto id = [n_theta](Index i, Index j) { return j * (n_theta + 1) + i; };
    std::vector<Node> nodes;
    for (Index j = 0; j <= n_r; ++j) {
        const double r = r_in + (r_out - r_in) * static_cast<double>(j) / static_cast<double>(n_r);
        for (Index i = 0; i <= n_theta; ++i) {
            // theta runs from pi/2 (top) through pi (stagnation line) to 3pi/2 (bottom)
            const double theta = std::numbers::pi * (0.5 + static_cast<double>(i) / static_cast<double>(n_theta));
            double x = r * std::cos(theta), y = r * std::sin(theta);
            if (i == 0 || i == n_theta) x = 0.0;
            nodes.push_back({id(i, j), x, y});
        }
    }
    std::vector<Element> elements;
    for (Index j = 0; j < n_r; ++j)
        for (Index i = 0; i < n_theta; ++i)
            elements.push_back({elements.size(), ElementKind::Q4,
                                {id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)}, 0.0});
    BoundarySet wall{"wall", BoundaryTag::Wall, {}, {}}, inflow{"inflow", BoundaryTag::SupersonicInflow, {}, {}};
    BoundarySet out_top{"outflow_top", BoundaryTag::SupersonicOutflow, {}, {}};
    BoundarySet out_bottom{"outflow_bottom", BoundaryTag::SupersonicOutflow, {}, {}};
    for (Index i = 0; i <= n_theta; ++i) {
        wall.nodes.push_back(id(i, 0));
        inflow.nodes.push_back(id(i, n_r));
    }
    for (Index j = 0; j <= n_r; ++j) {
        out_top.nodes.push_back(id(0, j));
        out_bottom.nodes.push_back(id(n_theta, j));
    }
    return Mesh(2, std::move(nodes), std::move(elements), {wall, inflow, out_top, out_bottom});
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-empty, non-comment line split into tokens.
    std::vector<std::string> next(const char* what) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream ss(line);
            std::vector<std::string> tokens;
            for (std::string t; ss >> t;) tokens.push_back(t);
            return tokens;
        }
        error(std::string("unexpected end of file, expected ") + what);
    }

    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no_) + ": " + msg);
    }

    Index to_index(const std::string& s) const {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            error("expected integer, got '" + s + "'");
        }
        if (pos != s.size() || v < 0) error("expected non-negative integer, got '" + s + "'");
        return static_cast<Index>(v);
    }

    double to_double(const std::string& s) const {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            error("expected number, got '" + s + "'");
        }
        if (pos != s.size()) error("expected number, got '" + s + "'");
        return v;
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

}  // namespace

Mesh parse_triangle_mesh(std::istream& in) {
    LineReader reader(in);
    auto header = reader.next("header");
    if (header.size() != 3) reader.error("header must be 'nnodes nelems nbsets'");
    const Index nnodes = reader.to_index(header[0]);
    const Index nelems = reader.to_index(header[1]);
    const Index nsets = reader.to_index(header[2]);

    std::vector<Node> nodes(nnodes);
    std::vector<char> seen(nnodes, 0);
    for (Index k = 0; k < nnodes; ++k) {
        auto t = reader.next("node line");
        if (t.size() != 3) reader.error("node line must be 'id x y'");
        Index id = reader.to_index(t[0]);
        if (id >= nnodes) reader.error("node id " + std::to_string(id) + " out of range");
        if (seen[id]) reader.error("duplicate node id " + std::to_string(id));
        seen[id] = 1;
        nodes[id] = {id, reader.to_double(t[1]), reader.to_double(t[2])};
    }

    std::vector<Element> elements(nelems);
    std::vector<std::size_t> element_lines(nelems);
    for (Index k = 0; k < nelems; ++k) {
        auto t = reader.next("element line");
        if (t.size() != 4) reader.error("element line must be 'id n1 n2 n3'");
        Index id = reader.to_index(t[0]);
        if (id >= nelems) reader.error("element id " + std::to_string(id) + " out of range");
        Element el{id, ElementKind::T3, {reader.to_index(t[1]), reader.to_index(t[2]), reader.to_index(t[3]), 0}, 0.0};
        for (Index n : el.vertices())
            if (n >= nnodes)
                fail(ErrorCode::TopologyError, "line " + std::to_string(reader.line_no()) + ": element " +
                                                   std::to_string(id) + " references missing node " +
                                                   std::to_string(n));
        elements[id] = el;
    }

    std::vector<BoundarySet> sets;
    std::map<std::string, int> name_count;
    for (Index s = 0; s < nsets; ++s) {
        auto t = reader.next("boundary set header");
        if (t.size() != 2) reader.error("boundary header must be 'tagname count'");
        BoundarySet set;
        set.tag = parse_boundary_tag(t[0]);
        int seen_before = name_count[to_string(set.tag)]++;
        set.name = to_string(set.tag);
        if (seen_before > 0) set.name += "#" + std::to_string(seen_before);
        const Index count = reader.to_index(t[1]);
        for (Index k = 0; k < count; ++k) {
            auto b = reader.next("boundary node line");
            if (b.size() != 3) reader.error("boundary line must be 'node_id nx ny'");
            Index n = reader.to_index(b[0]);
            if (n >= nnodes)
                fail(ErrorCode::TopologyError, "line " + std::to_string(reader.line_no()) +
                                                   ": boundary references missing node " + std::to_string(n));
            set.nodes.push_back(n);
            set.normals.push_back({reader.to_double(b[1]), reader.to_double(b[2])});
        }
        sets.push_back(std::move(set));
    }
    return Mesh(2, std::move(nodes), std::move(elements), std::move(sets));
}

Mesh load_triangle_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open mesh file " + path.string());
    return parse_triangle_mesh(in);
}

void write_triangle_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    require(mesh.dim() == 2, ErrorCode::InvalidArgument, "triangle mesh files are 2D");
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write mesh file " + path.string());
    out << std::setprecision(17);
    out << "# nnodes nelems nbsets\n";
    out << mesh.node_count() << ' ' << mesh.element_count() << ' ' << mesh.boundaries().size() << '\n';
    for (const auto& n : mesh.nodes()) out << n.id << ' ' << n.x << ' ' << n.y << '\n';
    for (const auto& el : mesh.elements()) {
        require(el.kind == ElementKind::T3, ErrorCode::InvalidArgument, "only T3 meshes can be written");
        out << el.id << ' ' << el.nodes[0] << ' ' << el.nodes[1] << ' ' << el.nodes[2] << '\n';
    }
    for (const auto& s : mesh.boundaries()) {
        out << to_string(s.tag) << ' ' << s.nodes.size() << '\n';
        for (std::size_t k = 0; k < s.nodes.size(); ++k)
            out << s.nodes[k] << ' ' << s.normals[k][0] << ' ' << s.normals[k][1] << '\n';
    }
    if (!out) fail(ErrorCode::IoError, "failed writing mesh file " + path.string());
}

}  // namespace ksupg
