#pragma once

#include "griffith/crack.hpp"
#include "griffith/mesh.hpp"

#include <array>
#include <vector>

namespace griffith {

/// Ties element-local corners into global degrees of freedom. Two corners at
/// the same vertex share a dof exactly when their elements are connected by a
/// chain of uncracked facets through that vertex, so jumps are structurally
/// zero off the crack.
struct DofMap {
    int n_dofs = 0;
    std::vector<std::array<int, 3>> element_dofs; // per element, per local corner
    std::vector<int> dof_vertex;                  // owning vertex of each dof

    int dof(int element, int corner) const { return element_dofs[element][corner]; }
};

/// Requires crack.valid_for(mesh). With an empty crack the dof count equals
/// the vertex count; it is nondecreasing under crack growth.
DofMap assemble_dof_map(const Mesh& mesh, const CrackState& crack);

} // namespace griffith
