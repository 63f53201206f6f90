#include "griffith/scenario.hpp"

#include "griffith/detail/number_format.hpp"
#include "griffith/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace griffith {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct Parser {
    std::vector<std::pair<int, std::string>> lines; // (line number, content)
    Scenario s;
    int mesh_line = 0;

    [[noreturn]] void fail(int line, const std::string& msg) { throw ScenarioError(line, msg); }

    double num(int line, const std::string& tok) {
        double v;
        if (!detail::parse_double(tok, v)) fail(line, "not a number: '" + tok + "'");
        return v;
    }
    int integer(int line, const std::string& tok) {
        int v;
        if (!detail::parse_int(tok, v)) fail(line, "not an integer: '" + tok + "'");
        return v;
    }
    std::vector<double> nums(int line, const std::string& text) {
        std::vector<double> out;
        for (const auto& tok : split_ws(text)) out.push_back(num(line, tok));
        return out;
    }

    void check_knots(int line, const std::vector<double>& ks) {
        if (ks.empty()) fail(line, "empty knot list");
        if (ks[0] != 0.0) fail(line, "first knot must be 0");
        for (std::size_t i = 1; i < ks.size(); ++i)
            if (!(ks[i] > ks[i - 1])) fail(line, "knots must be strictly increasing");
    }
};

} // namespace

Scenario parse_scenario(const std::string& text) {
    Parser P;
    {
        std::istringstream is(text);
        std::string line;
        int n = 0;
        while (std::getline(is, line)) {
            ++n;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            P.lines.emplace_back(n, t);
        }
    }
    if (P.lines.empty() || P.lines[0].second != "griffith-scenario v1")
        P.fail(P.lines.empty() ? 1 : P.lines[0].first,
               "expected header 'griffith-scenario v1'");

    Scenario& s = P.s;
    std::string section;
    for (std::size_t li = 1; li < P.lines.size(); ++li) {
        int ln = P.lines[li].first;
        const std::string& t = P.lines[li].second;
        if (t.front() == '[') {
            if (t.back() != ']') P.fail(ln, "malformed section header");
            section = t.substr(1, t.size() - 2);
            static const char* known[] = {"mesh",          "bulk",     "toughness",
                                          "body_force",    "surface_force", "boundary",
                                          "initial",       "time",     "settings"};
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* k) { return section == k; }) == std::end(known))
                P.fail(ln, "unknown section [" + section + "]");
            if (section == "mesh") P.mesh_line = ln;
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) P.fail(ln, "expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));

        if (section == "mesh") {
            if (key == "dim") {
                s.mesh.dim = P.integer(ln, val);
                if (s.mesh.dim != 1 && s.mesh.dim != 2) P.fail(ln, "dim must be 1 or 2");
            } else if (key == "interval") {
                auto v = P.nums(ln, val);
                if (v.size() != 2) P.fail(ln, "interval needs two numbers");
                s.mesh.a = v[0];
                s.mesh.b = v[1];
            } else if (key == "segments") {
                s.mesh.segments = P.integer(ln, val);
                if (s.mesh.segments < 1) P.fail(ln, "segments must be positive");
            } else if (key == "rect") {
                auto v = P.nums(ln, val);
                if (v.size() != 4) P.fail(ln, "rect needs x0 y0 x1 y1");
                s.mesh.x0 = v[0];
                s.mesh.y0 = v[1];
                s.mesh.x1 = v[2];
                s.mesh.y1 = v[3];
            } else if (key == "cells") {
                auto v = split_ws(val);
                if (v.size() != 2) P.fail(ln, "cells needs nx ny");
                s.mesh.nx = P.integer(ln, v[0]);
                s.mesh.ny = P.integer(ln, v[1]);
            } else if (key == "dirichlet") {
                s.mesh.dirichlet_sides = split_ws(val);
            } else if (key == "surface") {
                s.mesh.surface_sides = split_ws(val);
            } else if (key == "brittle_range") {
                auto v = P.nums(ln, val);
                if (v.size() != 2) P.fail(ln, "brittle_range needs lo hi");
                s.mesh.brittle_regions.push_back({v[0], 0.0, v[1], 0.0});
            } else if (key == "brittle_rect") {
                auto v = P.nums(ln, val);
                if (v.size() != 4) P.fail(ln, "brittle_rect needs x0 y0 x1 y1");
                s.mesh.brittle_regions.push_back({v[0], v[1], v[2], v[3]});
            } else {
                P.fail(ln, "unknown key '" + key + "' in [mesh]");
            }
        } else if (section == "bulk") {
            if (key == "p") {
                s.p = P.num(ln, val);
                if (!(s.p > 1.0)) P.fail(ln, "bulk exponent p must be > 1");
            } else if (key == "a") {
                s.stiffness = P.nums(ln, val);
                for (double a : s.stiffness)
                    if (!(a > 0.0)) P.fail(ln, "stiffness must be positive");
            } else {
                P.fail(ln, "unknown key '" + key + "' in [bulk]");
            }
        } else if (section == "toughness") {
            if (key == "mode") {
                if (val == "isotropic")
                    s.anisotropic = false;
                else if (val == "anisotropic")
                    s.anisotropic = true;
                else
                    P.fail(ln, "mode must be isotropic or anisotropic");
            } else if (key == "k") {
                s.k = P.nums(ln, val);
                for (double k : s.k)
                    if (!(k > 0.0)) P.fail(ln, "toughness must be positive");
            } else if (key == "A") {
                auto v = P.nums(ln, val);
                if (v.size() == 1) v = {v[0], 0.0, v[0]};
                if (v.size() != 3) P.fail(ln, "A needs a11 [a12 a22]");
                if (!(v[0] > 0.0 && v[0] * v[2] - v[1] * v[1] > 0.0))
                    P.fail(ln, "A must be symmetric positive definite");
                s.A.push_back({v[0], v[1], v[2]});
            } else {
                P.fail(ln, "unknown key '" + key + "' in [toughness]");
            }
        } else if (section == "body_force") {
            if (key == "q") {
                s.q = P.num(ln, val);
                if (!(s.q > 1.0))
                    P.fail(ln, "body-force exponent q must be > 1 (coercivity requires q > 1)");
            } else if (key == "epsilon") {
                s.eps = P.num(ln, val);
                if (s.eps < 0.0) P.fail(ln, "epsilon must be >= 0");
            } else if (key == "knots") {
                s.f_knots = P.nums(ln, val);
                P.check_knots(ln, s.f_knots);
            } else if (key == "f") {
                s.f_rows.push_back(P.nums(ln, val));
            } else {
                P.fail(ln, "unknown key '" + key + "' in [body_force]");
            }
        } else if (section == "surface_force") {
            if (key == "r") {
                s.r = P.num(ln, val);
                if (!(s.r > 1.0)) P.fail(ln, "surface-force exponent r must be > 1");
            } else if (key == "knots") {
                s.g_knots = P.nums(ln, val);
                P.check_knots(ln, s.g_knots);
            } else if (key == "g") {
                s.g_rows.push_back(P.nums(ln, val));
            } else {
                P.fail(ln, "unknown key '" + key + "' in [surface_force]");
            }
        } else if (section == "boundary") {
            if (key == "knots") {
                s.psi_knots = P.nums(ln, val);
                P.check_knots(ln, s.psi_knots);
            } else if (key == "psi") {
                s.psi_rows.push_back(P.nums(ln, val));
            } else {
                P.fail(ln, "unknown key '" + key + "' in [boundary]");
            }
        } else if (section == "initial") {
            if (key == "gamma0") {
                for (const auto& tok : split_ws(val)) s.gamma0.push_back(P.integer(ln, tok));
            } else if (key == "u0") {
                s.u0_rows.push_back(P.nums(ln, val));
            } else {
                P.fail(ln, "unknown key '" + key + "' in [initial]");
            }
        } else if (section == "time") {
            if (key == "T") {
                s.time.T = P.num(ln, val);
                if (!(s.time.T > 0.0)) P.fail(ln, "T must be positive");
            } else if (key == "steps") {
                s.time.steps = P.integer(ln, val);
                if (s.time.steps < 1) P.fail(ln, "steps must be positive");
            } else if (key == "points") {
                s.time.points = P.nums(ln, val);
            } else if (key == "shifted") {
                auto v = split_ws(val);
                if (v.size() != 2) P.fail(ln, "shifted needs 'm s'");
                s.time.shifted_m = P.integer(ln, v[0]);
                s.time.shifted_s = P.num(ln, v[1]);
                if (s.time.shifted_m < 1) P.fail(ln, "shifted density m must be >= 1");
            } else {
                P.fail(ln, "unknown key '" + key + "' in [time]");
            }
        } else if (section == "settings") {
            if (key == "strategy") {
                if (val == "exhaustive")
                    s.settings.strategy = SolveSettings::Strategy::exhaustive;
                else if (val == "greedy")
                    s.settings.strategy = SolveSettings::Strategy::greedy;
                else
                    P.fail(ln, "strategy must be exhaustive or greedy");
            } else if (key == "elastic_tol") {
                s.settings.elastic_tol = P.num(ln, val);
                if (!(s.settings.elastic_tol > 0.0)) P.fail(ln, "elastic_tol must be positive");
                s.elastic_tol_set = true;
            } else if (key == "max_newton_iters") {
                s.settings.max_newton_iters = P.integer(ln, val);
            } else if (key == "greedy_max_passes") {
                s.settings.greedy_max_passes = P.integer(ln, val);
            } else if (key == "exhaustive_cap") {
                s.settings.exhaustive_cap = P.integer(ln, val);
            } else if (key == "allow_floating") {
                if (val == "true")
                    s.settings.allow_floating = true;
                else if (val == "false")
                    s.settings.allow_floating = false;
                else
                    P.fail(ln, "allow_floating must be true or false");
            } else if (key == "tie_tol") {
                s.settings.tie_tol = P.num(ln, val);
                if (!(s.settings.tie_tol > 0.0)) P.fail(ln, "tie_tol must be positive");
            } else {
                P.fail(ln, "unknown key '" + key + "' in [settings]");
            }
        } else {
            P.fail(ln, "key outside any section");
        }
    }

    // cross-validate by building once; attribute failures to the [mesh] line
    try {
        build_simulation(s);
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ScenarioError(P.mesh_line, ex.what());
    }
    return s;
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ScenarioError(0, msg);
}

Trajectory make_trajectory(const std::vector<double>& knots,
                           const std::vector<std::vector<double>>& rows, double T, int field_size,
                           const std::string& what) {
    Trajectory tr;
    if (knots.empty()) return tr;
    require(rows.size() == knots.size(),
            what + ": needs one row per knot (" + std::to_string(knots.size()) + " knots, " +
                std::to_string(rows.size()) + " rows)");
    double tol = 1e-12 * (1.0 + T);
    require(std::abs(knots.back() - T) <= tol, what + ": last knot must equal T");
    tr.knots = knots;
    tr.knots.back() = T;
    for (const auto& row : rows) {
        require(static_cast<int>(row.size()) == field_size || row.size() == 1,
                what + ": row size must be 1 or " + std::to_string(field_size));
        tr.snapshots.push_back(row);
    }
    // broadcast uniform rows so that all snapshots agree in size
    bool any_full = false;
    for (const auto& r : tr.snapshots) any_full = any_full || r.size() > 1;
    if (any_full)
        for (auto& r : tr.snapshots)
            if (r.size() == 1 && field_size > 1) r.assign(field_size, r[0]);
    return tr;
}

} // namespace

Simulation build_simulation(const Scenario& s) {
    Simulation sim;
    sim.mesh = build_mesh(s.mesh);
    const Mesh& mesh = sim.mesh;
    double T = s.time.T;

    // bulk
    require(!s.stiffness.empty(), "bulk stiffness 'a' is required");
    require(s.stiffness.size() == 1 || static_cast<int>(s.stiffness.size()) == mesh.n_elements(),
            "stiffness needs 1 or n_elements values");
    sim.model.bulk.p = s.p;
    sim.model.bulk.stiffness = s.stiffness;

    // toughness over the brittle facets, kappa2-extended elsewhere
    std::vector<int> brittle = mesh.brittle_facet_ids();
    ToughnessModel& tough = sim.model.toughness;
    if (!s.anisotropic) {
        require(!s.k.empty(), "isotropic toughness 'k' is required");
        require(s.k.size() == 1 || s.k.size() == brittle.size(),
                "toughness k needs 1 or n_brittle_facets values");
        tough.mode = ToughnessModel::Mode::isotropic;
        double k2 = *std::max_element(s.k.begin(), s.k.end());
        tough.k.assign(mesh.n_facets(), k2);
        for (std::size_t i = 0; i < brittle.size(); ++i)
            tough.k[brittle[i]] = s.k.size() == 1 ? s.k[0] : s.k[i];
    } else {
        require(!s.A.empty(), "anisotropic toughness 'A' is required");
        require(s.A.size() == 1 || s.A.size() == brittle.size(),
                "toughness A needs 1 or n_brittle_facets rows");
        tough.mode = ToughnessModel::Mode::anisotropic;
        double k2 = 0.0;
        for (const auto& a : s.A) k2 = std::max(k2, std::max(a[0], a[2]));
        tough.A.assign(mesh.n_facets(), {k2, 0.0, k2});
        for (std::size_t i = 0; i < brittle.size(); ++i)
            tough.A[brittle[i]] = s.A.size() == 1 ? s.A[0] : s.A[i];
    }

    // loads
    sim.model.body.q = s.q;
    sim.model.body.eps = s.eps;
    sim.model.body.f = make_trajectory(s.f_knots, s.f_rows, T, mesh.n_elements(), "body force");
    sim.model.surface.r = s.r;
    sim.model.surface.facets = mesh.surface_facet_ids();
    require(s.g_knots.empty() || !sim.model.surface.facets.empty(),
            "surface force given but the mesh has no surface-force facets");
    sim.model.surface.g =
        make_trajectory(s.g_knots, s.g_rows, T,
                        static_cast<int>(sim.model.surface.facets.size()), "surface force");

    // boundary deformation (defaults to zero on the Dirichlet nodes)
    sim.boundary.nodes = mesh.dirichlet_vertex_ids();
    if (!s.psi_knots.empty()) {
        require(!sim.boundary.nodes.empty(), "boundary deformation given but no Dirichlet facets");
        sim.boundary.psi = make_trajectory(s.psi_knots, s.psi_rows, T,
                                           static_cast<int>(sim.boundary.nodes.size()),
                                           "boundary deformation");
    } else if (!sim.boundary.nodes.empty()) {
        sim.boundary.psi = Trajectory::constant(
            T, std::vector<double>(sim.boundary.nodes.size(), 0.0));
    }

    // initial crack and optional initial deformation
    sim.gamma0 = CrackState::empty(mesh);
    for (int f : s.gamma0) {
        require(f >= 0 && f < mesh.n_facets(), "gamma0 facet id out of range");
        require(mesh.is_brittle(f), "gamma0 facet " + std::to_string(f) + " is not brittle");
        sim.gamma0.add(f);
    }
    if (!s.u0_rows.empty()) {
        require(static_cast<int>(s.u0_rows.size()) == mesh.n_elements(),
                "u0 needs one row per element");
        auto dofs = std::make_shared<const DofMap>(assemble_dof_map(mesh, sim.gamma0));
        Deformation u0 = zero_deformation(mesh, dofs);
        std::vector<char> seen(dofs->n_dofs, 0);
        for (int e = 0; e < mesh.n_elements(); ++e) {
            require(static_cast<int>(s.u0_rows[e].size()) == mesh.dim + 1,
                    "u0 row " + std::to_string(e) + " needs " + std::to_string(mesh.dim + 1) +
                        " corner values");
            for (int c = 0; c <= mesh.dim; ++c) {
                int d = dofs->dof(e, c);
                double v = s.u0_rows[e][c];
                if (seen[d] && std::abs(u0.values[d] - v) > 1e-12 * (1.0 + std::abs(v)))
                    require(false, "u0 jumps across an uncracked facet near element " +
                                       std::to_string(e));
                u0.values[d] = v;
                seen[d] = 1;
            }
        }
        sim.u0 = std::move(u0);
    }

    // time grid
    if (!s.time.points.empty()) {
        require(s.time.points.front() == 0.0, "time points must start at 0");
        for (std::size_t i = 1; i < s.time.points.size(); ++i)
            require(s.time.points[i] > s.time.points[i - 1],
                    "time points must be strictly increasing");
        require(std::abs(s.time.points.back() - T) <= 1e-12 * (1.0 + T),
                "time points must end at T");
        sim.grid.points = s.time.points;
        sim.grid.points.back() = T;
    } else if (s.time.shifted_m > 0) {
        Subdivision sub = shifted_grid_subdivision(s.time.shifted_m, s.time.shifted_s, 0.0, T);
        sim.grid.points = sub.points;
    } else {
        require(s.time.steps > 0, "time grid needs steps, points, or shifted");
        sim.grid = TimeGrid::uniform(T, s.time.steps);
    }

    sim.settings = s.settings;
    if (!s.elastic_tol_set) sim.settings.elastic_tol = (s.p == 2.0) ? 1e-10 : 1e-8;
    return sim;
}

namespace {

std::string row(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += detail::fmt_double(v[i]);
    }
    return out;
}

} // namespace

std::string write_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "griffith-scenario v1\n\n[mesh]\n";
    os << "dim = " << s.mesh.dim << "\n";
    if (s.mesh.dim == 1) {
        os << "interval = " << detail::fmt_double(s.mesh.a) << " " << detail::fmt_double(s.mesh.b)
           << "\n";
        os << "segments = " << s.mesh.segments << "\n";
    } else {
        os << "rect = " << detail::fmt_double(s.mesh.x0) << " " << detail::fmt_double(s.mesh.y0)
           << " " << detail::fmt_double(s.mesh.x1) << " " << detail::fmt_double(s.mesh.y1) << "\n";
        os << "cells = " << s.mesh.nx << " " << s.mesh.ny << "\n";
    }
    auto sides = [&](const std::vector<std::string>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i];
        return out;
    };
    if (!s.mesh.dirichlet_sides.empty()) os << "dirichlet = " << sides(s.mesh.dirichlet_sides) << "\n";
    if (!s.mesh.surface_sides.empty()) os << "surface = " << sides(s.mesh.surface_sides) << "\n";
    for (const auto& r : s.mesh.brittle_regions) {
        if (s.mesh.dim == 1)
            os << "brittle_range = " << detail::fmt_double(r.x0) << " " << detail::fmt_double(r.x1)
               << "\n";
        else
            os << "brittle_rect = " << detail::fmt_double(r.x0) << " " << detail::fmt_double(r.y0)
               << " " << detail::fmt_double(r.x1) << " " << detail::fmt_double(r.y1) << "\n";
    }
    os << "\n[bulk]\np = " << detail::fmt_double(s.p) << "\na = " << row(s.stiffness) << "\n";
    os << "\n[toughness]\nmode = " << (s.anisotropic ? "anisotropic" : "isotropic") << "\n";
    if (!s.anisotropic) {
        os << "k = " << row(s.k) << "\n";
    } else {
        for (const auto& a : s.A)
            os << "A = " << detail::fmt_double(a[0]) << " " << detail::fmt_double(a[1]) << " "
               << detail::fmt_double(a[2]) << "\n";
    }
    if (!s.f_knots.empty() || s.eps > 0.0 || s.q != 2.0) {
        os << "\n[body_force]\nq = " << detail::fmt_double(s.q)
           << "\nepsilon = " << detail::fmt_double(s.eps) << "\n";
        if (!s.f_knots.empty()) {
            os << "knots = " << row(s.f_knots) << "\n";
            for (const auto& r : s.f_rows) os << "f = " << row(r) << "\n";
        }
    }
    if (!s.g_knots.empty() || s.r != 2.0) {
        os << "\n[surface_force]\nr = " << detail::fmt_double(s.r) << "\n";
        if (!s.g_knots.empty()) {
            os << "knots = " << row(s.g_knots) << "\n";
            for (const auto& r : s.g_rows) os << "g = " << row(r) << "\n";
        }
    }
    if (!s.psi_knots.empty()) {
        os << "\n[boundary]\nknots = " << row(s.psi_knots) << "\n";
        for (const auto& r : s.psi_rows) os << "psi = " << row(r) << "\n";
    }
    if (!s.gamma0.empty() || !s.u0_rows.empty()) {
        os << "\n[initial]\n";
        if (!s.gamma0.empty()) {
            os << "gamma0 =";
            for (int f : s.gamma0) os << " " << f;
            os << "\n";
        }
        for (const auto& r : s.u0_rows) os << "u0 = " << row(r) << "\n";
    }
    os << "\n[time]\nT = " << detail::fmt_double(s.time.T) << "\n";
    if (!s.time.points.empty())
        os << "points = " << row(s.time.points) << "\n";
    else if (s.time.shifted_m > 0)
        os << "shifted = " << s.time.shifted_m << " " << detail::fmt_double(s.time.shifted_s)
           << "\n";
    else
        os << "steps = " << s.time.steps << "\n";
    os << "\n[settings]\n";
    os << "strategy = "
       << (s.settings.strategy == SolveSettings::Strategy::exhaustive ? "exhaustive" : "greedy")
       << "\n";
    if (s.elastic_tol_set) os << "elastic_tol = " << detail::fmt_double(s.settings.elastic_tol) << "\n";
    os << "max_newton_iters = " << s.settings.max_newton_iters << "\n";
    os << "greedy_max_passes = " << s.settings.greedy_max_passes << "\n";
    os << "exhaustive_cap = " << s.settings.exhaustive_cap << "\n";
    os << "allow_floating = " << (s.settings.allow_floating ? "true" : "false") << "\n";
    os << "tie_tol = " << detail::fmt_double(s.settings.tie_tol) << "\n";
    return os.str();
}

Scenario load_scenario_file(const std::string& path) { return parse_scenario(read_file(path)); }

} // namespace griffith
