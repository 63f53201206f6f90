#pragma once

/// Element-wise affine scalar deformations whose jump set is confined to the
/// cracked facets encoded in the DofMap. Discrete counterpart of a special
/// function of bounded variation with p-integrable gradient.

#include "griffith/dof_map.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace griffith {

struct Deformation {
    const Mesh* mesh = nullptr;
    std::shared_ptr<const DofMap> dofs;
    Eigen::VectorXd values; // one value per dof

    double corner_value(int element, int corner) const {
        return values[dofs->dof(element, corner)];
    }

    /// Exact gradient of the element's affine interpolant.
    Point gradient(int element) const;

    /// Largest absolute nodal value.
    double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

/// Zero deformation under the given crack.
Deformation zero_deformation(const Mesh& mesh, std::shared_ptr<const DofMap> dofs);

/// Nodal interpolant of per-vertex values under the given crack (continuous
/// fields only: every corner of a dof gets the owning vertex's value).
Deformation interpolate_vertex_field(const Mesh& mesh, std::shared_ptr<const DofMap> dofs,
                                     const std::vector<double>& vertex_values);

/// Re-expresses u under a larger crack, keeping element-wise values identical.
/// Requires: u's crack is a subset of the crack that built `dofs`.
Deformation retie(const Deformation& u, std::shared_ptr<const DofMap> dofs);

/// Jump u+ - u- across a facet, oriented by the facet normal. Exactly zero on
/// uncracked interior facets. On a Dirichlet facet the exterior value is the
/// prescribed boundary deformation, passed as a per-vertex field; requesting a
/// jump on any other boundary facet throws.
double jump(const Deformation& u, int facet,
            const std::vector<double>* psi_vertex_values = nullptr);

/// Facets where |jump| exceeds 1e-12 * (1 + |u|_inf); diagnostic only.
std::vector<int> jump_set(const Deformation& u);

/// Pins dofs lying on uncracked Dirichlet facets to the prescribed trace;
/// dofs on cracked Dirichlet facets stay free. Returns the pinned field.
Deformation apply_dirichlet(const Deformation& u, const std::vector<double>& psi_vertex_values,
                            const CrackState& crack);

/// Pin mask and values for the Dirichlet condition under a crack.
struct DirichletPins {
    std::vector<char> pinned;       // per dof
    std::vector<double> pin_value;  // per dof, meaningful where pinned
};
DirichletPins dirichlet_pins(const Mesh& mesh, const DofMap& dofs,
                             const std::vector<double>& psi_vertex_values,
                             const CrackState& crack);

struct Norms {
    double grad_p = 0.0;    // ||grad u||_p over the mesh
    double bulk_q = 0.0;    // ||u||_q over the mesh
    double surface_r = 0.0; // ||u||_r over the surface-force facets
};

/// Exact for even integer exponents (the integrands are then polynomial);
/// other exponents fall back to a fixed 3-point Gauss rule per element/facet.
Norms norms(const Deformation& u, double p, double q, double r);

} // namespace griffith
