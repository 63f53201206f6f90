#pragma once

/// Energy functionals of the model: p-power bulk energy, toughness-weighted
/// crack energy, dead-load body and surface work with optional coercive
/// regularization, their differentials, and the time derivatives.

#include "griffith/crack.hpp"
#include "griffith/deformation.hpp"
#include "griffith/mesh.hpp"
#include "griffith/time_signals.hpp"

#include <optional>
#include <string>
#include <vector>

namespace griffith {

/// W(x, xi) = (a(x)/p) |xi|^p with per-element stiffness a(x) >= a_min > 0.
struct BulkModel {
    double p = 2.0;
    std::vector<double> stiffness; // per element

    double a_min() const;
    double a_max() const;
};

/// kappa(x, nu): isotropic per-facet toughness k(x), or |A(x) nu| with a
/// symmetric positive definite A(x) per facet. Either way a norm in nu.
struct ToughnessModel {
    enum class Mode { isotropic, anisotropic };
    Mode mode = Mode::isotropic;
    std::vector<double> k;                // per facet, isotropic
    std::vector<std::array<double, 3>> A; // per facet {a11, a12, a22}; a11 only in 1D

    /// kappa at the facet midpoint in direction nu (any vector, not only the
    /// facet normal).
    double kappa(const Mesh& mesh, int facet, Point nu) const;
    /// kappa at the facet midpoint in the facet's own normal.
    double kappa(const Mesh& mesh, int facet) const;

    /// Bounds kappa1 <= kappa(x, nu)/|nu| <= kappa2 over the brittle facets.
    double kappa1(const Mesh& mesh) const;
    double kappa2(const Mesh& mesh) const;
};

/// F(t, x, z) = f(t, x) z - (eps/q) |z|^q; f piecewise linear in t, constant
/// per element in x.
struct BodyForceModel {
    Trajectory f; // snapshots sized n_elements (empty trajectory = no force)
    double eps = 0.0;
    double q = 2.0;

    bool has_force() const { return !f.knots.empty(); }
};

/// G(t, x, z) = g(t, x) z on the surface-force facets; g piecewise linear in
/// t, constant per facet in x.
struct SurfaceForceModel {
    Trajectory g;            // snapshots sized facets.size() below
    std::vector<int> facets; // the surface-force facet ids, ascending
    double r = 2.0;

    bool has_force() const { return !g.knots.empty() && !facets.empty(); }
};

struct EnergyModel {
    BulkModel bulk;
    ToughnessModel toughness;
    BodyForceModel body;
    SurfaceForceModel surface;
};

struct EnergyBreakdown {
    double bulk = 0.0;         // W(grad u)
    double crack = 0.0;        // K(Gamma)
    double body_work = 0.0;    // F(t)(u)
    double surface_work = 0.0; // G(t)(u)
    double elastic = 0.0;      // bulk - body_work - surface_work
    double total = 0.0;        // elastic + crack
    double internal = 0.0;     // bulk + crack
    double load_work = 0.0;    // body_work + surface_work
};

double bulk_energy(const BulkModel& model, const Deformation& u);

/// <dW(grad u), grad v> = sum_e measure * a |grad u|^{p-2} grad u . grad v.
/// u and v must live on the same mesh; their cracks may differ.
double bulk_diff_pairing(const BulkModel& model, const Deformation& u, const Deformation& v);

/// K(Gamma): facets on the Neumann boundary contribute nothing.
double crack_energy(const ToughnessModel& model, const Mesh& mesh, const CrackState& crack);

double body_work(const BodyForceModel& model, const Mesh& mesh, double t, const Deformation& u);
double body_diff_pairing(const BodyForceModel& model, const Mesh& mesh, double t,
                         const Deformation& u, const Deformation& v);
double body_rate(const BodyForceModel& model, const Mesh& mesh, double t, const Deformation& u);

double surface_work(const SurfaceForceModel& model, const Mesh& mesh, double t,
                    const Deformation& u);
double surface_diff_pairing(const SurfaceForceModel& model, const Mesh& mesh, double t,
                            const Deformation& u, const Deformation& v);
double surface_rate(const SurfaceForceModel& model, const Mesh& mesh, double t,
                    const Deformation& u);

EnergyBreakdown total_energy(const EnergyModel& model, const Mesh& mesh, double t,
                             const Deformation& u, const CrackState& crack);

struct GrowthBoundsReport {
    bool lower_asserted = false; // the coercive bound needs eps > 0 (or zero loads)
    bool lower_ok = true;
    bool upper_ok = true;
    double lower_lhs = 0.0, upper_rhs = 0.0, elastic = 0.0;
    double alpha0 = 0.0, beta0 = 0.0, alpha1 = 0.0, beta1 = 0.0;
};

/// Checks alpha0 (|grad u|_p^p + eps |u|_q^q) - beta0 <= Ec(t)(u) and
/// Ec(t)(u) <= alpha1 (|grad u|_p^p + |u|_q^q + |u|_{r,S}^r) + beta1, with
/// constants derived from the model data. The lower bound is only asserted
/// when it is available: eps > 0, or identically zero loads.
GrowthBoundsReport growth_bounds_check(const EnergyModel& model, const Mesh& mesh, double t,
                                       const Deformation& u);

} // namespace griffith
