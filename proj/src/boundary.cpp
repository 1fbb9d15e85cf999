#include "ksupg/boundary.hpp"

#include <cmath>
#include <set>

#include "ksupg/error.hpp"

namespace ksupg {

StateVec project_wall(const StateVec& U, const Vec2& n) {
    StateVec out = U;
    if (U.size() == 4) {
        const double mn = U(1) * n[0] + U(2) * n[1];
        out(1) -= mn * n[0];
        out(2) -= mn * n[1];
    } else if (U.size() == 3) {
        out(1) -= U(1) * n[0] * n[0];
    }
    return out;
}

BoundaryPlan::BoundaryPlan(const Mesh& mesh, std::size_t components, const BoundaryData& data) {
    fixed_mask_.assign(mesh.node_count(), 0);
    const auto neighbors = mesh.node_neighbors();
    std::set<Index> walled, copied;
    for (const auto& set : mesh.boundaries()) {
        switch (set.tag) {
            case BoundaryTag::Dirichlet:
            case BoundaryTag::SupersonicInflow: {
                auto it = data.values.find(set.name);
                require(it != data.values.end(), ErrorCode::MissingTag,
                        "no boundary values supplied for set '" + set.name + "'");
                for (Index n : set.nodes) {
                    StateVec v = it->second(mesh.node(n).x, mesh.node(n).y);
                    require(static_cast<std::size_t>(v.size()) == components, ErrorCode::DimensionMismatch,
                            "boundary value for set '" + set.name + "' has the wrong size");
                    if (fixed_mask_[n]) continue;
                    fixed_mask_[n] = 1;
                    fixed_.push_back({n, std::move(v)});
                }
                break;
            }
            case BoundaryTag::Wall:
                for (std::size_t k = 0; k < set.nodes.size(); ++k)
                    if (walled.insert(set.nodes[k]).second) walls_.push_back({set.nodes[k], set.normals[k]});
                break;
            case BoundaryTag::SupersonicOutflow: {
                const std::set<Index> members(set.nodes.begin(), set.nodes.end());
                for (std::size_t k = 0; k < set.nodes.size(); ++k) {
                    const Index node = set.nodes[k];
                    if (!copied.insert(node).second) continue;
                    const Vec2 n = set.normals[k];
                    const Node& p = mesh.node(node);
                    Index best = node;
                    double best_score = -2.0;
                    // neighbour best aligned with the inward normal, outside this set
                    for (Index q : neighbors[node]) {
                        if (members.count(q)) continue;
                        const double dx = mesh.node(q).x - p.x, dy = mesh.node(q).y - p.y;
                        const double len = std::hypot(dx, dy);
                        const double score = -(dx * n[0] + dy * n[1]) / len;
                        if (score > best_score) {
                            best_score = score;
                            best = q;
                        }
                    }
                    require(best != node, ErrorCode::TopologyError,
                            "outflow node " + std::to_string(node) + " has no interior neighbour");
                    copies_.push_back({node, best});
                }
                break;
            }
            case BoundaryTag::Neumann: break;
        }
    }
}

void BoundaryPlan::apply(ConservedField& field) const {
    for (const auto& c : copies_) field.set_node(c.node, field.node(c.source));
    for (const auto& w : walls_) field.set_node(w.node, project_wall(field.node(w.node), w.normal));
    for (const auto& f : fixed_) field.set_node(f.node, f.value);
}

void BoundaryPlan::impose_rows(CsrMatrix& system, std::vector<double>& rhs, std::size_t m) const {
    for (const auto& f : fixed_)
        for (std::size_t c = 0; c < m; ++c) {
            system.replace_row_with_identity(f.node * m + c);
            rhs[f.node * m + c] = f.value(static_cast<Eigen::Index>(c));
        }
}

}  // namespace ksupg
