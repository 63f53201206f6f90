#include "griffith/mesh.hpp"

#include "griffith/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace griffith {

double Mesh::domain_measure() const {
    double s = 0.0;
    for (const auto& e : elements) s += e.measure;
    return s;
}

std::vector<int> Mesh::facet_ids_where(const std::vector<char>& flag) const {
    std::vector<int> out;
    for (int f = 0; f < n_facets(); ++f)
        if (flag[f]) out.push_back(f);
    return out;
}

std::vector<int> Mesh::dirichlet_vertex_ids() const {
    std::set<int> s;
    for (int f = 0; f < n_facets(); ++f)
        if (dirichlet[f])
            for (int c = 0; c < dim; ++c) s.insert(facets[f].vertices[c]);
    return {s.begin(), s.end()};
}

int Mesh::local_corner(int e, int v) const {
    for (int c = 0; c <= dim; ++c)
        if (elements[e].vertices[c] == v) return c;
    return -1;
}

namespace {

double cross2(Point a, Point b) { return a[0] * b[1] - a[1] * b[0]; }

Point centroid(const Mesh& m, int e) {
    Point c{0.0, 0.0};
    for (int k = 0; k <= m.dim; ++k) c = c + m.vertices[m.elements[e].vertices[k]];
    return (1.0 / (m.dim + 1)) * c;
}

void compute_shape_gradients(Mesh& m) {
    for (auto& e : m.elements) {
        if (m.dim == 1) {
            double h = m.vertices[e.vertices[1]][0] - m.vertices[e.vertices[0]][0];
            e.shape_grad[0] = {-1.0 / h, 0.0};
            e.shape_grad[1] = {1.0 / h, 0.0};
        } else {
            Point P0 = m.vertices[e.vertices[0]];
            Point P1 = m.vertices[e.vertices[1]];
            Point P2 = m.vertices[e.vertices[2]];
            double twoA = cross2(P1 - P0, P2 - P0);
            // grad of the barycentric coordinate of corner k: rotate the
            // opposite edge by 90 degrees and scale by 1/(2A).
            auto grad = [&](Point a, Point b) -> Point {
                Point edge = b - a;
                return {-edge[1] / twoA, edge[0] / twoA};
            };
            e.shape_grad[0] = grad(P1, P2);
            e.shape_grad[1] = grad(P2, P0);
            e.shape_grad[2] = grad(P0, P1);
        }
    }
}

void build_incidence(Mesh& m) {
    m.vertex_elements.assign(m.vertices.size(), {});
    m.vertex_facets.assign(m.vertices.size(), {});
    for (int e = 0; e < m.n_elements(); ++e)
        for (int c = 0; c <= m.dim; ++c) m.vertex_elements[m.elements[e].vertices[c]].push_back(e);
    for (int f = 0; f < m.n_facets(); ++f)
        for (int c = 0; c < m.dim; ++c) m.vertex_facets[m.facets[f].vertices[c]].push_back(f);
}

Mesh build_1d(const MeshSpec& spec) {
    if (spec.segments < 1) throw MeshError("1D mesh needs at least one segment");
    if (!(spec.b > spec.a)) throw MeshError("1D interval must have positive length");
    int N = spec.segments;
    Mesh m;
    m.dim = 1;
    m.vertices.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        double s = static_cast<double>(i) / N;
        m.vertices[i] = {spec.a * (1.0 - s) + spec.b * s, 0.0};
    }
    m.elements.resize(N);
    for (int i = 0; i < N; ++i) {
        m.elements[i].vertices = {i, i + 1, -1};
        m.elements[i].measure = m.vertices[i + 1][0] - m.vertices[i][0];
    }
    m.facets.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        Facet& f = m.facets[i];
        f.vertices = {i, -1};
        f.midpoint = m.vertices[i];
        f.measure = 1.0;
        if (i == 0) {
            f.adjacent_elements = {0, -1};
            f.normal = {-1.0, 0.0};
        } else if (i == N) {
            f.adjacent_elements = {N - 1, -1};
            f.normal = {1.0, 0.0};
        } else {
            f.adjacent_elements = {i - 1, i};
            f.normal = {1.0, 0.0};
        }
    }
    return m;
}

Mesh build_2d(const MeshSpec& spec) {
    if (spec.nx < 1 || spec.ny < 1) throw MeshError("2D mesh needs at least one cell per direction");
    if (!(spec.x1 > spec.x0) || !(spec.y1 > spec.y0))
        throw MeshError("2D rectangle must have positive side lengths");
    int nx = spec.nx, ny = spec.ny;
    Mesh m;
    m.dim = 2;
    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    m.vertices.resize((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            double sx = static_cast<double>(i) / nx;
            double sy = static_cast<double>(j) / ny;
            m.vertices[vid(i, j)] = {spec.x0 * (1 - sx) + spec.x1 * sx,
                                     spec.y0 * (1 - sy) + spec.y1 * sy};
        }
    double cell_area = (spec.x1 - spec.x0) / nx * (spec.y1 - spec.y0) / ny;
    m.elements.reserve(2 * nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            // cell split along the (i,j)-(i+1,j+1) diagonal
            Element lo, up;
            lo.vertices = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)};
            up.vertices = {vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)};
            lo.measure = up.measure = 0.5 * cell_area;
            m.elements.push_back(lo);
            m.elements.push_back(up);
        }

    // collect edges; lower adjacent element id registers first
    std::map<std::pair<int, int>, std::array<int, 2>> edges;
    for (int e = 0; e < m.n_elements(); ++e) {
        const auto& v = m.elements[e].vertices;
        for (int k = 0; k < 3; ++k) {
            int a = v[k], b = v[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = edges.try_emplace({a, b}, std::array<int, 2>{e, -1});
            if (!inserted) it->second[1] = e;
        }
    }
    m.facets.reserve(edges.size());
    for (const auto& [key, adj] : edges) {
        Facet f;
        f.vertices = {key.first, key.second};
        f.adjacent_elements = adj;
        Point A = m.vertices[key.first], B = m.vertices[key.second];
        f.midpoint = 0.5 * (A + B);
        Point edge = B - A;
        f.measure = norm(edge);
        Point n{edge[1] / f.measure, -edge[0] / f.measure};
        Point away = f.midpoint - centroid(m, adj[0]);
        if (dot(n, away) < 0) n = {-n[0], -n[1]};
        f.normal = n;
        m.facets.push_back(f);
    }
    return m;
}

bool near(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * scale; }

// Side of a boundary facet: all its vertices lie on that side of the box.
std::string boundary_side(const Mesh& m, const MeshSpec& spec, const Facet& f) {
    double sx = spec.dim == 1 ? (spec.b - spec.a) : (spec.x1 - spec.x0);
    double sy = spec.dim == 1 ? 1.0 : (spec.y1 - spec.y0);
    double lo_x = spec.dim == 1 ? spec.a : spec.x0;
    double hi_x = spec.dim == 1 ? spec.b : spec.x1;
    bool left = true, right = true, bottom = true, top = true;
    for (int c = 0; c < m.dim; ++c) {
        Point p = m.vertices[f.vertices[c]];
        left = left && near(p[0], lo_x, sx);
        right = right && near(p[0], hi_x, sx);
        if (m.dim == 2) {
            bottom = bottom && near(p[1], spec.y0, sy);
            top = top && near(p[1], spec.y1, sy);
        }
    }
    if (left) return "left";
    if (right) return "right";
    if (m.dim == 2 && bottom) return "bottom";
    if (m.dim == 2 && top) return "top";
    return "";
}

} // namespace

Mesh build_mesh(const MeshSpec& spec) {
    if (spec.dim != 1 && spec.dim != 2) throw MeshError("dim must be 1 or 2");
    Mesh m = spec.dim == 1 ? build_1d(spec) : build_2d(spec);
    compute_shape_gradients(m);
    build_incidence(m);

    auto known_side = [&](const std::string& s) {
        if (spec.dim == 1) return s == "left" || s == "right";
        return s == "left" || s == "right" || s == "bottom" || s == "top";
    };
    for (const auto& s : spec.dirichlet_sides)
        if (!known_side(s)) throw MeshError("unknown boundary side '" + s + "'");
    for (const auto& s : spec.surface_sides) {
        if (!known_side(s)) throw MeshError("unknown boundary side '" + s + "'");
        for (const auto& d : spec.dirichlet_sides)
            if (d == s)
                throw MeshError("side '" + s + "' labeled both Dirichlet and surface-force");
    }

    int nf = m.n_facets();
    m.dirichlet.assign(nf, 0);
    m.neumann.assign(nf, 0);
    m.surface_force.assign(nf, 0);
    m.brittle.assign(nf, 0);

    for (int f = 0; f < nf; ++f) {
        if (!m.facets[f].is_boundary()) continue;
        std::string side = boundary_side(m, spec, m.facets[f]);
        if (side.empty()) throw MeshError("facet " + std::to_string(f) + " lies on no box side");
        bool dir = std::count(spec.dirichlet_sides.begin(), spec.dirichlet_sides.end(), side) > 0;
        bool surf = std::count(spec.surface_sides.begin(), spec.surface_sides.end(), side) > 0;
        m.dirichlet[f] = dir;
        m.neumann[f] = !dir;
        m.surface_force[f] = surf;
    }

    for (int f = 0; f < nf; ++f) {
        if (m.neumann[f]) continue; // cracks on the Neumann part carry no energy, never selected
        Point mp = m.facets[f].midpoint;
        for (const auto& r : spec.brittle_regions) {
            double tolx = 1e-12 * (1.0 + std::abs(r.x1 - r.x0));
            double toly = 1e-12 * (1.0 + std::abs(r.y1 - r.y0));
            bool inside = mp[0] >= r.x0 - tolx && mp[0] <= r.x1 + tolx;
            if (m.dim == 2) inside = inside && mp[1] >= r.y0 - toly && mp[1] <= r.y1 + toly;
            if (inside) {
                m.brittle[f] = 1;
                break;
            }
        }
    }

    // Surface forces may act on the brittle part only through unbreakable
    // material: no element may border both kinds of facet.
    std::vector<int> brittle_facet_of(m.n_elements(), -1), surface_facet_of(m.n_elements(), -1);
    for (int f = 0; f < nf; ++f)
        for (int side = 0; side < 2; ++side) {
            int e = m.facets[f].adjacent_elements[side];
            if (e < 0) continue;
            if (m.brittle[f]) brittle_facet_of[e] = f;
            if (m.surface_force[f]) surface_facet_of[e] = f;
        }
    for (int e = 0; e < m.n_elements(); ++e)
        if (brittle_facet_of[e] >= 0 && surface_facet_of[e] >= 0) {
            std::ostringstream os;
            os << "element " << e << " borders brittle facet " << brittle_facet_of[e]
               << " and surface-force facet " << surface_facet_of[e];
            throw MeshError(os.str());
        }

    return m;
}

std::vector<std::string> validate_partition(const Mesh& m) {
    std::vector<std::string> out;
    auto report = [&](const std::string& s) { out.push_back(s); };

    for (int f = 0; f < m.n_facets(); ++f) {
        const Facet& fc = m.facets[f];
        std::string name = "facet " + std::to_string(f);
        if (fc.is_boundary()) {
            if (m.dirichlet[f] && m.neumann[f]) report(name + ": both Dirichlet and Neumann");
            if (!m.dirichlet[f] && !m.neumann[f]) report(name + ": boundary facet with no label");
            if (fc.adjacent_elements[0] < 0) report(name + ": boundary facet with no element");
        } else {
            if (m.dirichlet[f] || m.neumann[f]) report(name + ": interior facet carries a boundary label");
            if (fc.adjacent_elements[0] < 0 || fc.adjacent_elements[1] < 0)
                report(name + ": interior facet must have two adjacent elements");
            else if (fc.adjacent_elements[0] >= fc.adjacent_elements[1])
                report(name + ": adjacent elements not in ascending order");
        }
        if (m.surface_force[f] && !m.neumann[f]) report(name + ": surface-force facet not on the Neumann part");
        if (m.brittle[f] && m.neumann[f]) report(name + ": brittle facet on the Neumann part");
        if (!(fc.measure > 0)) report(name + ": nonpositive measure");
        if (std::abs(norm(fc.normal) - 1.0) > 1e-12) report(name + ": normal not unit length");
        if (m.dim == 2 && fc.vertices[1] >= 0) {
            Point edge = m.vertices[fc.vertices[1]] - m.vertices[fc.vertices[0]];
            if (std::abs(dot(fc.normal, edge)) > 1e-12 * norm(edge))
                report(name + ": normal not orthogonal to the facet");
        }
        // orientation: from the lower adjacent element toward the higher / outward
        if (fc.adjacent_elements[0] >= 0) {
            Point c0{0.0, 0.0};
            for (int k = 0; k <= m.dim; ++k)
                c0 = c0 + m.vertices[m.elements[fc.adjacent_elements[0]].vertices[k]];
            c0 = (1.0 / (m.dim + 1)) * c0;
            if (dot(fc.normal, fc.midpoint - c0) <= 0) report(name + ": normal orientation flipped");
        }
    }

    std::vector<int> brittle_facet_of(m.n_elements(), -1), surface_facet_of(m.n_elements(), -1);
    for (int f = 0; f < m.n_facets(); ++f)
        for (int side = 0; side < 2; ++side) {
            int e = m.facets[f].adjacent_elements[side];
            if (e < 0) continue;
            if (m.brittle[f]) brittle_facet_of[e] = f;
            if (m.surface_force[f]) surface_facet_of[e] = f;
        }
    for (int e = 0; e < m.n_elements(); ++e)
        if (brittle_facet_of[e] >= 0 && surface_facet_of[e] >= 0)
            report("element " + std::to_string(e) + ": borders brittle facet " +
                   std::to_string(brittle_facet_of[e]) + " and surface-force facet " +
                   std::to_string(surface_facet_of[e]));

    return out;
}

} // namespace griffith
