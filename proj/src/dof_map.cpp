#include "griffith/dof_map.hpp"

#include "griffith/errors.hpp"

#include <algorithm>

namespace griffith {

namespace {

// Tiny union-find over the elements incident to one vertex.
struct Fan {
    std::vector<int> parent;

    explicit Fan(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

DofMap assemble_dof_map(const Mesh& mesh, const CrackState& crack) {
    if (!crack.valid_for(mesh)) throw MeshError("crack state not valid for this mesh");

    DofMap map;
    map.element_dofs.assign(mesh.elements.size(), {-1, -1, -1});

    for (int v = 0; v < mesh.n_vertices(); ++v) {
        const auto& elems = mesh.vertex_elements[v]; // ascending element ids
        Fan fan(static_cast<int>(elems.size()));
        auto slot = [&](int e) {
            return static_cast<int>(
                std::lower_bound(elems.begin(), elems.end(), e) - elems.begin());
        };
        for (int f : mesh.vertex_facets[v]) {
            const Facet& fc = mesh.facets[f];
            if (fc.is_boundary() || crack.contains(f)) continue;
            fan.unite(slot(fc.adjacent_elements[0]), slot(fc.adjacent_elements[1]));
        }
        // one dof per connected fan component, numbered by lowest element id
        std::vector<int> root_dof(elems.size(), -1);
        for (std::size_t i = 0; i < elems.size(); ++i) {
            int r = fan.find(static_cast<int>(i));
            if (root_dof[r] < 0) {
                root_dof[r] = map.n_dofs++;
                map.dof_vertex.push_back(v);
            }
            int e = elems[i];
            map.element_dofs[e][mesh.local_corner(e, v)] = root_dof[r];
        }
    }
    return map;
}

} // namespace griffith
