#pragma once

/// Simplicial reference configuration: interval meshes in 1D, structured
/// triangulations of rectangles in 2D. Boundary facets are partitioned into
/// a Dirichlet part and a Neumann part; surface forces act on a subset of
/// the Neumann part; cracks may occupy a designated brittle facet subset.

#include "griffith/geometry.hpp"

#include <string>
#include <vector>

namespace griffith {

struct Element {
    std::array<int, 3> vertices{-1, -1, -1}; // dim+1 entries used
    double measure = 0.0;                    // length (1D) or area (2D)
    std::array<Point, 3> shape_grad{};       // gradient of each P1 shape function
};

struct Facet {
    std::array<int, 2> vertices{-1, -1};          // 1 vertex in 1D, 2 in 2D
    std::array<int, 2> adjacent_elements{-1, -1}; // [1] == -1 on the boundary
    Point midpoint{0.0, 0.0};
    Point normal{0.0, 0.0}; // unit; from adjacent_elements[0] toward [1], outward on boundary
    double measure = 0.0;   // H^{n-1}: 1 in 1D, edge length in 2D

    bool is_boundary() const { return adjacent_elements[1] < 0; }
};

struct Mesh {
    int dim = 1;
    std::vector<Point> vertices;
    std::vector<Element> elements;
    std::vector<Facet> facets;

    // Facet label flags, each sized facets.size().
    std::vector<char> dirichlet;     // part of boundary with prescribed deformation
    std::vector<char> neumann;       // remaining boundary
    std::vector<char> surface_force; // subset of neumann carrying applied surface forces
    std::vector<char> brittle;       // facets a crack may occupy (never on the Neumann part)

    // Incidence tables, built once at construction.
    std::vector<std::vector<int>> vertex_elements; // elements touching a vertex
    std::vector<std::vector<int>> vertex_facets;   // facets containing a vertex

    bool is_dirichlet(int f) const { return dirichlet[f] != 0; }
    bool is_neumann(int f) const { return neumann[f] != 0; }
    bool is_surface(int f) const { return surface_force[f] != 0; }
    bool is_brittle(int f) const { return brittle[f] != 0; }

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_elements() const { return static_cast<int>(elements.size()); }
    int n_facets() const { return static_cast<int>(facets.size()); }
    int corners() const { return dim + 1; }

    double domain_measure() const;
    std::vector<int> facet_ids_where(const std::vector<char>& flag) const;
    std::vector<int> brittle_facet_ids() const { return facet_ids_where(brittle); }
    std::vector<int> surface_facet_ids() const { return facet_ids_where(surface_force); }
    /// Sorted vertex ids lying on some Dirichlet facet.
    std::vector<int> dirichlet_vertex_ids() const;
    /// Local corner index of vertex v in element e, or -1.
    int local_corner(int e, int v) const;
};

struct BrittleRegion {
    // Closed axis-aligned box; a facet is brittle when its midpoint lies inside
    // and it is not on the Neumann boundary.
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct MeshSpec {
    int dim = 1;

    // 1D interval
    double a = 0.0, b = 1.0;
    int segments = 1;

    // 2D rectangle, nx-by-ny cells, each split into two triangles
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
    int nx = 1, ny = 1;

    // Sides carrying the prescribed deformation: "left"/"right" (1D) plus
    // "bottom"/"top" (2D). Unlisted sides are Neumann.
    std::vector<std::string> dirichlet_sides;
    // Sides carrying surface forces; must not be Dirichlet sides.
    std::vector<std::string> surface_sides;

    std::vector<BrittleRegion> brittle_regions;
};

/// Builds the mesh with facet geometry and label sets.
/// Throws MeshError on inconsistent labels or when an element adjacent to a
/// brittle facet also borders a surface-force facet.
Mesh build_mesh(const MeshSpec& spec);

/// Diagnostic re-check of all Mesh invariants. Returns one message per
/// violation, naming the offending facet or element; empty when valid.
std::vector<std::string> validate_partition(const Mesh& mesh);

} // namespace griffith
