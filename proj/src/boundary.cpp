#include "griffith/boundary.hpp"

namespace griffith {

std::vector<double> BoundaryDeformation::field(const Mesh& mesh, double t) const {
    std::vector<double> out(mesh.n_vertices(), 0.0);
    if (psi.knots.empty()) return out;
    std::vector<double> vals = psi.eval(t);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        out[nodes[k]] = vals.size() == 1 ? vals[0] : vals[k];
    return out;
}

std::vector<double> BoundaryDeformation::rate_field(const Mesh& mesh, double t) const {
    std::vector<double> out(mesh.n_vertices(), 0.0);
    if (psi.knots.empty()) return out;
    std::vector<double> vals = psi.rate(t);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        out[nodes[k]] = vals.size() == 1 ? vals[0] : vals[k];
    return out;
}

BoundaryDeformation BoundaryDeformation::zero(const Mesh& mesh) {
    BoundaryDeformation b;
    b.nodes = mesh.dirichlet_vertex_ids();
    return b;
}

} // namespace griffith
