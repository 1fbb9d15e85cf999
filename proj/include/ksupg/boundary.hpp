#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ksupg/field.hpp"
#include "ksupg/mesh.hpp"
#include "ksupg/sparse_matrix.hpp"

namespace ksupg {

/// Prescribed conserved state as a function of position.
using StateFunction = std::function<StateVec(double x, double y)>;

/// Values for the Dirichlet / supersonic-inflow sets, keyed by boundary set name.
struct BoundaryData {
    std::map<std::string, StateFunction> values;
};

/// Strong boundary treatment resolved against one mesh.
///
/// Application order is outflow copy, then wall projection, then Dirichlet overwrite,
/// so a node shared by several sets ends up with the value of the last of these.
class BoundaryPlan {
public:
    BoundaryPlan() = default;
    /// Throws MissingTag when a Dirichlet or inflow set has no value in `data`.
    BoundaryPlan(const Mesh& mesh, std::size_t components, const BoundaryData& data);

    struct Fixed {
        Index node;
        StateVec value;
    };
    struct WallNode {
        Index node;
        Vec2 normal;
    };
    struct Copy {
        Index node;
        Index source;
    };

    const std::vector<Fixed>& fixed() const { return fixed_; }
    const std::vector<WallNode>& walls() const { return walls_; }
    const std::vector<Copy>& copies() const { return copies_; }
    bool is_fixed(Index node) const { return fixed_mask_.size() > node && fixed_mask_[node] != 0; }

    /// Overwrites boundary nodes of the field.
    void apply(ConservedField& field) const;

    /// Replaces the block rows of fixed nodes by identity rows; rhs gets the prescribed values.
    void impose_rows(CsrMatrix& system, std::vector<double>& rhs, std::size_t components) const;

private:
    std::vector<Fixed> fixed_;
    std::vector<WallNode> walls_;
    std::vector<Copy> copies_;
    std::vector<char> fixed_mask_;
};

/// Removes the normal component of momentum: ρv ← ρv − (ρv·n)n.
StateVec project_wall(const StateVec& U, const Vec2& normal);

}  // namespace ksupg
