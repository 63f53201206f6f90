#pragma once

/// Scenario files: a line-oriented, human-writable description of mesh,
/// models, loads, boundary deformation, initial crack, time grid and solver
/// settings. See README for the format.

#include "griffith/errors.hpp"
#include "griffith/evolution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace griffith {

struct TimeSpec {
    double T = 1.0;
    int steps = 0;                      // uniform grid when > 0
    std::vector<double> points;         // explicit grid (overrides steps)
    int shifted_m = 0;                  // shifted-grid subdivision when > 0
    double shifted_s = 0.0;
};

struct Scenario {
    MeshSpec mesh;

    // [bulk]
    double p = 2.0;
    std::vector<double> stiffness; // one value (uniform) or one per element

    // [toughness]
    bool anisotropic = false;
    std::vector<double> k;                 // one value or one per brittle facet
    std::vector<std::array<double, 3>> A;  // one row or one per brittle facet

    // [body_force]; empty knots = no body force
    double q = 2.0;
    double eps = 0.0;
    std::vector<double> f_knots;
    std::vector<std::vector<double>> f_rows; // per knot; row size 1 (uniform) or n_elements

    // [surface_force]
    double r = 2.0;
    std::vector<double> g_knots;
    std::vector<std::vector<double>> g_rows; // per knot; size 1 or n_surface_facets

    // [boundary]
    std::vector<double> psi_knots;
    std::vector<std::vector<double>> psi_rows; // per knot; size 1 or n_dirichlet_nodes

    // [initial]
    std::vector<int> gamma0;                  // facet ids
    std::vector<std::vector<double>> u0_rows; // optional: per element, dim+1 corner values

    TimeSpec time;
    SolveSettings settings;
    bool elastic_tol_set = false; // otherwise defaulted from p
};

/// Everything built and cross-validated, ready to run.
struct Simulation {
    Mesh mesh;
    EnergyModel model;
    BoundaryDeformation boundary;
    TimeGrid grid;
    SolveSettings settings;
    CrackState gamma0;
    std::optional<Deformation> u0;

    Problem problem() const { return Problem{&mesh, &model, &boundary, settings}; }
};

/// Parses the documented format; throws ScenarioError with the offending line.
Scenario parse_scenario(const std::string& text);

/// Canonical serialization; parse_scenario(write_scenario(s)) reproduces s.
std::string write_scenario(const Scenario& s);

/// Builds mesh and models, checking every cross-reference (field sizes, facet
/// ids, knot spans, exponents). Throws ScenarioError (line 0) on violations.
Simulation build_simulation(const Scenario& s);

Scenario load_scenario_file(const std::string& path);

} // namespace griffith
