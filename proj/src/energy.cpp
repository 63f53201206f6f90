#include "griffith/energy.hpp"

#include "griffith/detail/simplex_quadrature.hpp"
#include "griffith/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace griffith {

namespace {

double stiffness_at(const BulkModel& m, int e) {
    return m.stiffness.size() == 1 ? m.stiffness[0] : m.stiffness[e];
}

double traj_value(const Trajectory& tr, double t, int slot) {
    if (tr.field_size() == 1) return tr.eval(t)[0];
    return tr.eval(t)[slot];
}

double traj_rate(const Trajectory& tr, double t, int slot) {
    if (tr.field_size() == 1) return tr.rate(t)[0];
    return tr.rate(t)[slot];
}

// trace of u on a boundary facet as corner values of a (dim-1)-simplex
void facet_trace(const Mesh& m, const Deformation& u, int f, double* tv) {
    const Facet& fc = m.facets[f];
    int e = fc.adjacent_elements[0];
    for (int c = 0; c < m.dim; ++c)
        tv[c] = u.corner_value(e, m.local_corner(e, fc.vertices[c]));
}

double facet_integral_affine(const Mesh& m, int f, const double* tv) {
    if (m.dim == 1) return m.facets[f].measure * tv[0];
    return m.facets[f].measure * 0.5 * (tv[0] + tv[1]);
}

} // namespace

double BulkModel::a_min() const {
    return *std::min_element(stiffness.begin(), stiffness.end());
}
double BulkModel::a_max() const {
    return *std::max_element(stiffness.begin(), stiffness.end());
}

double ToughnessModel::kappa(const Mesh& mesh, int facet, Point nu) const {
    if (mode == Mode::isotropic) {
        double kf = k.size() == 1 ? k[0] : k[facet];
        return kf * norm(nu);
    }
    const auto& a = A.size() == 1 ? A[0] : A[facet];
    if (mesh.dim == 1) return a[0] * std::abs(nu[0]);
    Point Anu{a[0] * nu[0] + a[1] * nu[1], a[1] * nu[0] + a[2] * nu[1]};
    return norm(Anu);
}

double ToughnessModel::kappa(const Mesh& mesh, int facet) const {
    return kappa(mesh, facet, mesh.facets[facet].normal);
}

namespace {

// |A nu| is pinched between the SPD eigenvalues of A
void spd_eigs(const std::array<double, 3>& a, int dim, double& lo, double& hi) {
    if (dim == 1) {
        lo = hi = a[0];
        return;
    }
    double tr = a[0] + a[2];
    double det = a[0] * a[2] - a[1] * a[1];
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    lo = tr / 2.0 - disc;
    hi = tr / 2.0 + disc;
}

} // namespace

double ToughnessModel::kappa1(const Mesh& mesh) const {
    double out = std::numeric_limits<double>::infinity();
    for (int f = 0; f < mesh.n_facets(); ++f) {
        if (!mesh.is_brittle(f)) continue;
        if (mode == Mode::isotropic) {
            out = std::min(out, k.size() == 1 ? k[0] : k[f]);
        } else {
            double lo, hi;
            spd_eigs(A.size() == 1 ? A[0] : A[f], mesh.dim, lo, hi);
            out = std::min(out, lo);
        }
    }
    return std::isfinite(out) ? out : 0.0;
}

double ToughnessModel::kappa2(const Mesh& mesh) const {
    double out = 0.0;
    for (int f = 0; f < mesh.n_facets(); ++f) {
        if (!mesh.is_brittle(f)) continue;
        if (mode == Mode::isotropic) {
            out = std::max(out, k.size() == 1 ? k[0] : k[f]);
        } else {
            double lo, hi;
            spd_eigs(A.size() == 1 ? A[0] : A[f], mesh.dim, lo, hi);
            out = std::max(out, hi);
        }
    }
    return out;
}

double bulk_energy(const BulkModel& model, const Deformation& u) {
    const Mesh& m = *u.mesh;
    double out = 0.0;
    for (int e = 0; e < m.n_elements(); ++e) {
        double g = norm(u.gradient(e));
        out += m.elements[e].measure * stiffness_at(model, e) / model.p * std::pow(g, model.p);
    }
    return out;
}

double bulk_diff_pairing(const BulkModel& model, const Deformation& u, const Deformation& v) {
    const Mesh& m = *u.mesh;
    double out = 0.0;
    for (int e = 0; e < m.n_elements(); ++e) {
        Point gu = u.gradient(e);
        Point gv = v.gradient(e);
        double gn = norm(gu);
        double w;
        if (model.p == 2.0)
            w = 1.0;
        else if (gn == 0.0)
            w = 0.0; // p > 2: the stress vanishes with the gradient
        else
            w = std::pow(gn, model.p - 2.0);
        out += m.elements[e].measure * stiffness_at(model, e) * w * dot(gu, gv);
    }
    return out;
}

double crack_energy(const ToughnessModel& model, const Mesh& mesh, const CrackState& crack) {
    double out = 0.0;
    for (int f = 0; f < mesh.n_facets(); ++f) {
        if (!crack.contains(f)) continue;
        if (mesh.is_neumann(f)) continue; // no energy on the Neumann part
        out += model.kappa(mesh, f) * mesh.facets[f].measure;
    }
    return out;
}

double body_work(const BodyForceModel& model, const Mesh& mesh, double t, const Deformation& u) {
    double out = 0.0;
    double vals[3];
    std::vector<double> f_now;
    if (model.has_force()) f_now = model.f.eval(t);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const Element& el = mesh.elements[e];
        for (int c = 0; c <= mesh.dim; ++c) vals[c] = u.corner_value(e, c);
        if (model.has_force()) {
            double fe = f_now.size() == 1 ? f_now[0] : f_now[e];
            out += fe * detail::simplex_int_pow(mesh.dim, el.measure, vals, 1);
        }
        if (model.eps > 0.0)
            out -= model.eps / model.q *
                   detail::simplex_int_abs_pow(mesh.dim, el.measure, vals, model.q);
    }
    return out;
}

double body_diff_pairing(const BodyForceModel& model, const Mesh& mesh, double t,
                         const Deformation& u, const Deformation& v) {
    double out = 0.0;
    double uv[3], vv[3];
    std::vector<double> f_now;
    if (model.has_force()) f_now = model.f.eval(t);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const Element& el = mesh.elements[e];
        for (int c = 0; c <= mesh.dim; ++c) {
            uv[c] = u.corner_value(e, c);
            vv[c] = v.corner_value(e, c);
        }
        if (model.has_force()) {
            double fe = f_now.size() == 1 ? f_now[0] : f_now[e];
            out += fe * detail::simplex_int_pow(mesh.dim, el.measure, vv, 1);
        }
        if (model.eps > 0.0)
            for (int c = 0; c <= mesh.dim; ++c)
                out -= model.eps * vv[c] *
                       detail::simplex_int_signed_pow_shape(mesh.dim, el.measure, uv,
                                                            model.q - 1.0, c);
    }
    return out;
}

double body_rate(const BodyForceModel& model, const Mesh& mesh, double t, const Deformation& u) {
    if (!model.has_force()) return 0.0;
    double out = 0.0;
    double vals[3];
    std::vector<double> fdot = model.f.rate(t);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        double fe = fdot.size() == 1 ? fdot[0] : fdot[e];
        if (fe == 0.0) continue;
        for (int c = 0; c <= mesh.dim; ++c) vals[c] = u.corner_value(e, c);
        out += fe * detail::simplex_int_pow(mesh.dim, mesh.elements[e].measure, vals, 1);
    }
    return out;
}

double surface_work(const SurfaceForceModel& model, const Mesh& mesh, double t,
                    const Deformation& u) {
    if (!model.has_force()) return 0.0;
    double out = 0.0;
    double tv[2];
    for (std::size_t s = 0; s < model.facets.size(); ++s) {
        double g = traj_value(model.g, t, static_cast<int>(s));
        if (g == 0.0) continue;
        facet_trace(mesh, u, model.facets[s], tv);
        out += g * facet_integral_affine(mesh, model.facets[s], tv);
    }
    return out;
}

double surface_diff_pairing(const SurfaceForceModel& model, const Mesh& mesh, double t,
                            const Deformation& u, const Deformation& v) {
    (void)u; // G is linear in the deformation
    if (!model.has_force()) return 0.0;
    double out = 0.0;
    double tv[2];
    for (std::size_t s = 0; s < model.facets.size(); ++s) {
        double g = traj_value(model.g, t, static_cast<int>(s));
        if (g == 0.0) continue;
        facet_trace(mesh, v, model.facets[s], tv);
        out += g * facet_integral_affine(mesh, model.facets[s], tv);
    }
    return out;
}

double surface_rate(const SurfaceForceModel& model, const Mesh& mesh, double t,
                    const Deformation& u) {
    if (!model.has_force()) return 0.0;
    double out = 0.0;
    double tv[2];
    for (std::size_t s = 0; s < model.facets.size(); ++s) {
        double gdot = traj_rate(model.g, t, static_cast<int>(s));
        if (gdot == 0.0) continue;
        facet_trace(mesh, u, model.facets[s], tv);
        out += gdot * facet_integral_affine(mesh, model.facets[s], tv);
    }
    return out;
}

EnergyBreakdown total_energy(const EnergyModel& model, const Mesh& mesh, double t,
                             const Deformation& u, const CrackState& crack) {
    EnergyBreakdown b;
    b.bulk = bulk_energy(model.bulk, u);
    b.crack = crack_energy(model.toughness, mesh, crack);
    b.body_work = body_work(model.body, mesh, t, u);
    b.surface_work = surface_work(model.surface, mesh, t, u);
    b.load_work = b.body_work + b.surface_work;
    b.elastic = b.bulk - b.load_work;
    b.internal = b.bulk + b.crack;
    b.total = b.internal - b.load_work;
    return b;
}

namespace {

// Smallest value of the quadrature of |u|^q over the reference simplex among
// affine u with unit max corner value; ties the sup of the trace to the bulk
// q-norm on the adjacent element. Scanned numerically once per (dim, q).
double min_unit_abs_pow_integral(int dim, double q) {
    double best = std::numeric_limits<double>::infinity();
    if (dim == 1) {
        for (int i = 0; i <= 400; ++i) {
            double v[2] = {1.0, -1.0 + 2.0 * i / 400.0};
            best = std::min(best, detail::simplex_int_abs_pow(1, 1.0, v, q));
        }
    } else {
        for (int i = 0; i <= 80; ++i)
            for (int j = 0; j <= 80; ++j) {
                double v[3] = {1.0, -1.0 + 2.0 * i / 80.0, -1.0 + 2.0 * j / 80.0};
                best = std::min(best, detail::simplex_int_abs_pow(2, 1.0, v, q));
            }
    }
    return 0.95 * best; // scan margin
}

double max_knot_lq_power(const Trajectory& tr, const Mesh& mesh, bool per_element, double dual_q) {
    // max over knots of sum measure * |field|^dual_q (convexity puts the max at a knot)
    double out = 0.0;
    for (const auto& snap : tr.snapshots) {
        double s = 0.0;
        if (per_element) {
            for (int e = 0; e < mesh.n_elements(); ++e) {
                double fe = snap.size() == 1 ? snap[0] : snap[e];
                s += mesh.elements[e].measure * std::pow(std::abs(fe), dual_q);
            }
        }
        out = std::max(out, s);
    }
    return out;
}

} // namespace

GrowthBoundsReport growth_bounds_check(const EnergyModel& model, const Mesh& mesh, double t,
                                       const Deformation& u) {
    GrowthBoundsReport rep;
    const double p = model.bulk.p, q = model.body.q, r = model.surface.r;
    const double eps = model.body.eps;
    const double qd = q / (q - 1.0), rd = r / (r - 1.0);

    // norm powers, same quadrature as everywhere else
    double grad_pow = 0.0, bulk_pow = 0.0, surf_pow = 0.0;
    {
        Norms n = norms(u, p, q, r);
        grad_pow = std::pow(n.grad_p, p);
        bulk_pow = std::pow(n.bulk_q, q);
        surf_pow = std::pow(n.surface_r, r);
    }

    bool has_f = model.body.has_force();
    bool has_g = model.surface.has_force();

    double alpha0W = model.bulk.a_min() / p;
    double alpha1W = model.bulk.a_max() / p;

    // upper bound: W <= a1W |grad|^p; -F <= ((eps+1)/q)|u|^q + |f|^{q'}/q';
    // -G <= (1/r)|u|^r + |g|^{r'}/r'
    double alpha1F = 0.0, beta1F = 0.0, alpha1G = 0.0, beta1G = 0.0;
    if (has_f || eps > 0.0) {
        alpha1F = (eps + 1.0) / q;
        if (has_f) beta1F = max_knot_lq_power(model.body.f, mesh, true, qd) / qd;
    }
    if (has_g) {
        alpha1G = 1.0 / r;
        double gpow = 0.0;
        for (const auto& snap : model.surface.g.snapshots) {
            double s = 0.0;
            for (std::size_t k = 0; k < model.surface.facets.size(); ++k) {
                double gf = snap.size() == 1 ? snap[0] : snap[k];
                s += mesh.facets[model.surface.facets[k]].measure * std::pow(std::abs(gf), rd);
            }
            gpow = std::max(gpow, s);
        }
        beta1G = gpow / rd;
    }
    rep.alpha1 = std::max({alpha1W, alpha1F, alpha1G});
    rep.beta1 = beta1F + beta1G;

    // lower bound: needs eps > 0 to absorb the load terms (or no loads at all)
    rep.lower_asserted = (eps > 0.0) || (!has_f && !has_g);
    if (rep.lower_asserted) {
        if (eps > 0.0) {
            double beta0 = 0.0;
            if (has_f) {
                // f u <= (eps/(3q))|u|^q + |f|^{q'} / (q' (eps/3)^{q'/q})
                double lam_pow = std::pow(eps / 3.0, qd / q);
                beta0 += max_knot_lq_power(model.body.f, mesh, true, qd) / (qd * lam_pow);
            }
            if (has_g) {
                // per surface facet: g-work <= w_f * sup|u| on the adjacent
                // element, and c_q m_e sup|u|^q <= integral of |u|^q there
                double cq = min_unit_abs_pow_integral(mesh.dim, q);
                for (std::size_t k = 0; k < model.surface.facets.size(); ++k) {
                    int f = model.surface.facets[k];
                    double gmax = 0.0;
                    for (const auto& snap : model.surface.g.snapshots)
                        gmax = std::max(gmax, std::abs(snap.size() == 1 ? snap[0] : snap[k]));
                    double w = gmax * mesh.facets[f].measure;
                    if (w == 0.0) continue;
                    double me = mesh.elements[mesh.facets[f].adjacent_elements[0]].measure;
                    double lam_q = eps * cq * me / (3.0 * (mesh.dim + 1));
                    beta0 += std::pow(w, qd) / (qd * std::pow(lam_q, qd / q));
                }
            }
            rep.alpha0 = std::min(alpha0W, 1.0 / (3.0 * q));
            rep.beta0 = beta0;
        } else {
            rep.alpha0 = alpha0W;
            rep.beta0 = 0.0;
        }
    }

    EnergyBreakdown b = total_energy(model, mesh, t, u, CrackState::empty(mesh));
    rep.elastic = b.elastic;
    double slack = 1e-9 * (1.0 + std::abs(b.elastic));
    rep.upper_rhs = rep.alpha1 * (grad_pow + bulk_pow + surf_pow) + rep.beta1;
    rep.upper_ok = b.elastic <= rep.upper_rhs + slack;
    if (rep.lower_asserted) {
        rep.lower_lhs = rep.alpha0 * (grad_pow + eps * bulk_pow) - rep.beta0;
        rep.lower_ok = rep.lower_lhs <= b.elastic + slack;
    }
    return rep;
}

} // namespace griffith
