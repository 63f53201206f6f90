#pragma once

#include "griffith/mesh.hpp"
#include "griffith/time_signals.hpp"

#include <vector>

namespace griffith {

/// Prescribed boundary deformation psi(t): a trajectory of nodal values on
/// the Dirichlet vertices. For pairings and competitors the boundary data is
/// extended into the mesh by nodal interpolation, zero at all other vertices.
struct BoundaryDeformation {
    std::vector<int> nodes; // sorted Dirichlet vertex ids
    Trajectory psi;         // snapshots sized nodes.size()

    /// Full per-vertex field at time t (the canonical extension).
    std::vector<double> field(const Mesh& mesh, double t) const;
    /// Full per-vertex field of the rate at time t (right-interval slope).
    std::vector<double> rate_field(const Mesh& mesh, double t) const;

    static BoundaryDeformation zero(const Mesh& mesh);
};

} // namespace griffith
