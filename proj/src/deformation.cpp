#include "griffith/deformation.hpp"

#include "griffith/detail/simplex_quadrature.hpp"
#include "griffith/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace griffith {

Point Deformation::gradient(int element) const {
    const Element& e = mesh->elements[element];
    Point g{0.0, 0.0};
    for (int c = 0; c <= mesh->dim; ++c) {
        double v = values[dofs->dof(element, c)];
        g = g + v * e.shape_grad[c];
    }
    return g;
}

Deformation zero_deformation(const Mesh& mesh, std::shared_ptr<const DofMap> dofs) {
    Deformation u;
    u.mesh = &mesh;
    u.dofs = std::move(dofs);
    u.values = Eigen::VectorXd::Zero(u.dofs->n_dofs);
    return u;
}

Deformation interpolate_vertex_field(const Mesh& mesh, std::shared_ptr<const DofMap> dofs,
                                     const std::vector<double>& vertex_values) {
    Deformation u;
    u.mesh = &mesh;
    u.dofs = std::move(dofs);
    u.values.resize(u.dofs->n_dofs);
    for (int d = 0; d < u.dofs->n_dofs; ++d) u.values[d] = vertex_values[u.dofs->dof_vertex[d]];
    return u;
}

Deformation retie(const Deformation& u, std::shared_ptr<const DofMap> dofs) {
    Deformation out;
    out.mesh = u.mesh;
    out.dofs = std::move(dofs);
    out.values.resize(out.dofs->n_dofs);
    for (int e = 0; e < u.mesh->n_elements(); ++e)
        for (int c = 0; c <= u.mesh->dim; ++c)
            out.values[out.dofs->dof(e, c)] = u.corner_value(e, c);
    return out;
}

double jump(const Deformation& u, int facet, const std::vector<double>* psi_vertex_values) {
    const Mesh& m = *u.mesh;
    const Facet& f = m.facets[facet];
    if (f.is_boundary()) {
        if (!m.is_dirichlet(facet))
            throw std::invalid_argument("jump requested on a Neumann facet without boundary data");
        if (!psi_vertex_values)
            throw std::invalid_argument("jump on a Dirichlet facet needs the boundary deformation");
        // outward normal: the exterior (psi) side is the + side
        int e = f.adjacent_elements[0];
        double s = 0.0;
        for (int c = 0; c < m.dim; ++c) {
            int v = f.vertices[c];
            s += (*psi_vertex_values)[v] - u.corner_value(e, m.local_corner(e, v));
        }
        return s / m.dim;
    }
    int e_lo = f.adjacent_elements[0]; // normal points from [0] toward [1]
    int e_hi = f.adjacent_elements[1];
    double s = 0.0;
    for (int c = 0; c < m.dim; ++c) {
        int v = f.vertices[c];
        s += u.corner_value(e_hi, m.local_corner(e_hi, v)) -
             u.corner_value(e_lo, m.local_corner(e_lo, v));
    }
    return s / m.dim;
}

std::vector<int> jump_set(const Deformation& u) {
    std::vector<int> out;
    double tol = 1e-12 * (1.0 + u.max_abs());
    for (int f = 0; f < u.mesh->n_facets(); ++f) {
        if (u.mesh->facets[f].is_boundary()) continue;
        if (std::abs(jump(u, f)) > tol) out.push_back(f);
    }
    return out;
}

DirichletPins dirichlet_pins(const Mesh& mesh, const DofMap& dofs,
                             const std::vector<double>& psi_vertex_values,
                             const CrackState& crack) {
    DirichletPins pins;
    pins.pinned.assign(dofs.n_dofs, 0);
    pins.pin_value.assign(dofs.n_dofs, 0.0);
    for (int f = 0; f < mesh.n_facets(); ++f) {
        if (!mesh.is_dirichlet(f) || crack.contains(f)) continue;
        int e = mesh.facets[f].adjacent_elements[0];
        for (int c = 0; c < mesh.dim; ++c) {
            int v = mesh.facets[f].vertices[c];
            int d = dofs.dof(e, mesh.local_corner(e, v));
            pins.pinned[d] = 1;
            pins.pin_value[d] = psi_vertex_values[v];
        }
    }
    return pins;
}

Deformation apply_dirichlet(const Deformation& u, const std::vector<double>& psi_vertex_values,
                            const CrackState& crack) {
    Deformation out = u;
    DirichletPins pins = dirichlet_pins(*u.mesh, *u.dofs, psi_vertex_values, crack);
    for (int d = 0; d < u.dofs->n_dofs; ++d)
        if (pins.pinned[d]) out.values[d] = pins.pin_value[d];
    return out;
}

Norms norms(const Deformation& u, double p, double q, double r) {
    const Mesh& m = *u.mesh;
    double gp = 0.0, bq = 0.0, sr = 0.0;
    double vals[3];
    for (int e = 0; e < m.n_elements(); ++e) {
        const Element& el = m.elements[e];
        gp += el.measure * std::pow(norm(u.gradient(e)), p);
        for (int c = 0; c <= m.dim; ++c) vals[c] = u.corner_value(e, c);
        bq += detail::simplex_int_abs_pow(m.dim, el.measure, vals, q);
    }
    for (int f = 0; f < m.n_facets(); ++f) {
        if (!m.is_surface(f)) continue;
        const Facet& fc = m.facets[f];
        int e = fc.adjacent_elements[0];
        if (m.dim == 1) {
            double v = u.corner_value(e, m.local_corner(e, fc.vertices[0]));
            sr += fc.measure * std::pow(std::abs(v), r);
        } else {
            double tv[2] = {u.corner_value(e, m.local_corner(e, fc.vertices[0])),
                            u.corner_value(e, m.local_corner(e, fc.vertices[1]))};
            sr += detail::simplex_int_abs_pow(1, fc.measure, tv, r);
        }
    }
    return {std::pow(gp, 1.0 / p), std::pow(bq, 1.0 / q), sr > 0 ? std::pow(sr, 1.0 / r) : 0.0};
}

} // namespace griffith
