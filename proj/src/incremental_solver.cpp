#include "griffith/incremental_solver.hpp"

#include "griffith/detail/simplex_quadrature.hpp"
#include "griffith/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>

namespace griffith {

namespace {

// Gradient of the elastic energy with respect to every dof.
void elastic_gradient(const Problem& prob, double t, const Deformation& u, Eigen::VectorXd& g) {
    const Mesh& mesh = *prob.mesh;
    const EnergyModel& model = *prob.model;
    g.setZero(u.dofs->n_dofs);

    const double p = model.bulk.p;
    double uv[3];
    std::vector<double> f_now;
    if (model.body.has_force()) f_now = model.body.f.eval(t);

    for (int e = 0; e < mesh.n_elements(); ++e) {
        const Element& el = mesh.elements[e];
        Point gu = u.gradient(e);
        double gn = norm(gu);
        double w = (p == 2.0) ? 1.0 : (gn == 0.0 ? 0.0 : std::pow(gn, p - 2.0));
        double a = model.bulk.stiffness.size() == 1 ? model.bulk.stiffness[0]
                                                    : model.bulk.stiffness[e];
        for (int c = 0; c <= mesh.dim; ++c) {
            int d = u.dofs->dof(e, c);
            g[d] += el.measure * a * w * dot(gu, el.shape_grad[c]);
        }
        bool need_corner_vals = model.body.has_force() || model.body.eps > 0.0;
        if (need_corner_vals)
            for (int c = 0; c <= mesh.dim; ++c) uv[c] = u.corner_value(e, c);
        if (model.body.has_force()) {
            double fe = f_now.size() == 1 ? f_now[0] : f_now[e];
            // d(-F)/du_d with F = integral f u: -f * integral(shape)
            for (int c = 0; c <= mesh.dim; ++c)
                g[u.dofs->dof(e, c)] -= fe * el.measure / (mesh.dim + 1);
        }
        if (model.body.eps > 0.0) {
            for (int c = 0; c <= mesh.dim; ++c)
                g[u.dofs->dof(e, c)] +=
                    model.body.eps * detail::simplex_int_signed_pow_shape(
                                         mesh.dim, el.measure, uv, model.body.q - 1.0, c);
        }
    }

    if (model.surface.has_force()) {
        std::vector<double> g_now = model.surface.g.eval(t);
        for (std::size_t s = 0; s < model.surface.facets.size(); ++s) {
            int f = model.surface.facets[s];
            double gs = g_now.size() == 1 ? g_now[0] : g_now[s];
            if (gs == 0.0) continue;
            const Facet& fc = mesh.facets[f];
            int e = fc.adjacent_elements[0];
            for (int c = 0; c < mesh.dim; ++c) {
                int d = u.dofs->dof(e, mesh.local_corner(e, fc.vertices[c]));
                g[d] -= gs * fc.measure / mesh.dim;
            }
        }
    }
}

// Hessian of the elastic energy (triplets over all dofs).
void elastic_hessian(const Problem& prob, double t, const Deformation& u,
                     std::vector<Eigen::Triplet<double>>& trip) {
    (void)t;
    const Mesh& mesh = *prob.mesh;
    const EnergyModel& model = *prob.model;
    const double p = model.bulk.p;
    trip.clear();
    double uv[3];

    for (int e = 0; e < mesh.n_elements(); ++e) {
        const Element& el = mesh.elements[e];
        Point gu = u.gradient(e);
        double gn = norm(gu);
        double a = model.bulk.stiffness.size() == 1 ? model.bulk.stiffness[0]
                                                    : model.bulk.stiffness[e];
        // d2W = a |xi|^{p-2} (I + (p-2) xi_hat xi_hat^T)
        double w0 = (p == 2.0) ? 1.0 : (gn == 0.0 ? 0.0 : std::pow(gn, p - 2.0));
        Point dir = (gn > 0.0) ? (1.0 / gn) * gu : Point{0.0, 0.0};
        for (int c1 = 0; c1 <= mesh.dim; ++c1)
            for (int c2 = 0; c2 <= mesh.dim; ++c2) {
                double hij = dot(el.shape_grad[c1], el.shape_grad[c2]);
                double extra = (p != 2.0 && gn > 0.0)
                                   ? (p - 2.0) * dot(dir, el.shape_grad[c1]) *
                                         dot(dir, el.shape_grad[c2])
                                   : 0.0;
                double v = el.measure * a * w0 * (hij + extra);
                if (v != 0.0)
                    trip.emplace_back(u.dofs->dof(e, c1), u.dofs->dof(e, c2), v);
            }
        if (model.body.eps > 0.0) {
            for (int c = 0; c <= mesh.dim; ++c) uv[c] = u.corner_value(e, c);
            double qq = model.body.q;
            for (int c1 = 0; c1 <= mesh.dim; ++c1)
                for (int c2 = 0; c2 <= mesh.dim; ++c2) {
                    double v = model.body.eps * (qq - 1.0) *
                               detail::simplex_int_abs_pow_2shapes(mesh.dim, el.measure, uv,
                                                                   qq - 2.0, c1, c2);
                    if (v != 0.0)
                        trip.emplace_back(u.dofs->dof(e, c1), u.dofs->dof(e, c2), v);
                }
        }
    }
}

double elastic_value(const Problem& prob, double t, const Deformation& u) {
    const EnergyModel& m = *prob.model;
    return bulk_energy(m.bulk, u) - body_work(m.body, *prob.mesh, t, u) -
           surface_work(m.surface, *prob.mesh, t, u);
}

// Connected components of the dof graph (dofs interact within an element).
std::vector<int> dof_components(const Mesh& mesh, const DofMap& dofs) {
    std::vector<int> parent(dofs.n_dofs);
    for (int i = 0; i < dofs.n_dofs; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int e = 0; e < mesh.n_elements(); ++e)
        for (int c = 1; c <= mesh.dim; ++c) {
            int a = find(dofs.dof(e, 0)), b = find(dofs.dof(e, c));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<int> comp(dofs.n_dofs);
    for (int i = 0; i < dofs.n_dofs; ++i) comp[i] = find(i);
    return comp;
}

struct FreeSystem {
    std::vector<int> free_to_dof;
    std::vector<char> fixed; // Dirichlet pins plus any floating pins
};

} // namespace

Deformation solve_elastic(const Problem& prob, double t, const CrackState& crack,
                          const Deformation* warm_start) {
    const Mesh& mesh = *prob.mesh;
    auto dofs = std::make_shared<const DofMap>(assemble_dof_map(mesh, crack));
    std::vector<double> psi_vertex = prob.boundary->field(mesh, t);
    DirichletPins pins = dirichlet_pins(mesh, *dofs, psi_vertex, crack);

    Deformation u = warm_start ? retie(*warm_start, dofs) : zero_deformation(mesh, dofs);
    for (int d = 0; d < dofs->n_dofs; ++d)
        if (pins.pinned[d]) u.values[d] = pins.pin_value[d];

    FreeSystem sys;
    sys.fixed.assign(dofs->n_dofs, 0);
    for (int d = 0; d < dofs->n_dofs; ++d) sys.fixed[d] = pins.pinned[d];

    // A crack can cut a piece loose from the Dirichlet data; with eps = 0 the
    // minimum along constant shifts is flat (zero net load) or absent.
    if (prob.model->body.eps <= 0.0) {
        std::vector<int> comp = dof_components(mesh, *dofs);
        std::vector<char> comp_pinned(dofs->n_dofs, 0);
        for (int d = 0; d < dofs->n_dofs; ++d)
            if (sys.fixed[d]) comp_pinned[comp[d]] = 1;
        Eigen::VectorXd load = Eigen::VectorXd::Zero(dofs->n_dofs);
        {
            // gradient of the load part alone, independent of u when eps = 0
            Deformation zero_u = zero_deformation(mesh, dofs);
            elastic_gradient(prob, t, zero_u, load);
        }
        std::vector<char> handled(dofs->n_dofs, 0);
        for (int d = 0; d < dofs->n_dofs; ++d) {
            int c = comp[d];
            if (comp_pinned[c] || handled[c]) continue;
            handled[c] = 1;
            double net = 0.0;
            for (int d2 = 0; d2 < dofs->n_dofs; ++d2)
                if (comp[d2] == c) net += load[d2];
            double tol = prob.settings.elastic_tol * (1.0 + load.cwiseAbs().maxCoeff());
            if (std::abs(net) > tol) {
                std::ostringstream os;
                os << "floating component at vertex " << dofs->dof_vertex[c]
                   << " carries net load " << net << " with eps = 0 (energy unbounded)";
                throw SolverError(os.str());
            }
            if (!prob.settings.allow_floating) {
                std::ostringstream os;
                os << "singular system: component at vertex " << dofs->dof_vertex[c]
                   << " is not pinned and eps = 0";
                throw SolverError(os.str());
            }
            sys.fixed[c] = 1; // pin the lowest dof at its warm-start value
        }
    }

    for (int d = 0; d < dofs->n_dofs; ++d)
        if (!sys.fixed[d]) sys.free_to_dof.push_back(d);
    std::vector<int> dof_to_free(dofs->n_dofs, -1);
    for (std::size_t i = 0; i < sys.free_to_dof.size(); ++i) dof_to_free[sys.free_to_dof[i]] = i;
    int nfree = static_cast<int>(sys.free_to_dof.size());
    if (nfree == 0) return u;

    Eigen::VectorXd grad(dofs->n_dofs);
    std::vector<Eigen::Triplet<double>> trip;
    double energy = elastic_value(prob, t, u);

    for (int iter = 0; iter < prob.settings.max_newton_iters; ++iter) {
        elastic_gradient(prob, t, u, grad);
        double res = 0.0;
        for (int d : sys.free_to_dof) res = std::max(res, std::abs(grad[d]));
        if (res <= prob.settings.elastic_tol) return u;

        elastic_hessian(prob, t, u, trip);
        Eigen::SparseMatrix<double> H(nfree, nfree);
        {
            std::vector<Eigen::Triplet<double>> ft;
            ft.reserve(trip.size());
            for (const auto& tr : trip) {
                int i = dof_to_free[tr.row()], j = dof_to_free[tr.col()];
                if (i >= 0 && j >= 0) ft.emplace_back(i, j, tr.value());
            }
            H.setFromTriplets(ft.begin(), ft.end());
        }
        Eigen::VectorXd b(nfree);
        for (int i = 0; i < nfree; ++i) b[i] = -grad[sys.free_to_dof[i]];

        Eigen::VectorXd delta;
        double mu = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::SparseMatrix<double> Hm = H;
            if (mu > 0.0) {
                Eigen::SparseMatrix<double> I(nfree, nfree);
                I.setIdentity();
                Hm = H + mu * I;
            }
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Hm);
            if (ldlt.info() == Eigen::Success) {
                delta = ldlt.solve(b);
                if (delta.allFinite() && b.dot(delta) > 0.0) break;
            }
            mu = (mu == 0.0) ? 1e-10 * (1.0 + b.cwiseAbs().maxCoeff()) : 100.0 * mu;
            delta.resize(0);
        }
        if (delta.size() == 0) throw SolverError("Hessian factorization failed");

        double slope = -b.dot(delta); // directional derivative, negative
        double alpha = 1.0;
        Deformation trial = u;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (int i = 0; i < nfree; ++i)
                trial.values[sys.free_to_dof[i]] = u.values[sys.free_to_dof[i]] + alpha * delta[i];
            double etrial = elastic_value(prob, t, trial);
            if (etrial <= energy + 1e-4 * alpha * slope || etrial < energy) {
                u = trial;
                energy = etrial;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) throw SolverError("line search failed in the elastic solve");
    }
    // quadratic problems land in one iteration; report otherwise
    elastic_gradient(prob, t, u, grad);
    double res = 0.0;
    for (int d : sys.free_to_dof) res = std::max(res, std::abs(grad[d]));
    if (res <= prob.settings.elastic_tol) return u;
    throw SolverError("Newton did not reach the requested Euler residual");
}

double euler_residual(const Problem& prob, double t, const Deformation& u,
                      const CrackState& crack) {
    const Mesh& mesh = *prob.mesh;
    std::vector<double> psi_vertex = prob.boundary->field(mesh, t);
    DirichletPins pins = dirichlet_pins(mesh, *u.dofs, psi_vertex, crack);
    Eigen::VectorXd grad;
    elastic_gradient(prob, t, u, grad);
    double res = 0.0;
    for (int d = 0; d < u.dofs->n_dofs; ++d)
        if (!pins.pinned[d]) res = std::max(res, std::abs(grad[d]));
    return res;
}

namespace {

struct Candidate {
    double energy = std::numeric_limits<double>::infinity();
    int cardinality = std::numeric_limits<int>::max();
    std::vector<int> added; // ascending facet ids
    Deformation u;
    CrackState crack;
    EnergyBreakdown breakdown;
    bool set = false;
};

// energy first (within tie_tol), then cardinality, then lexicographic facets
bool better(const Candidate& cand, const Candidate& best, double tie_tol) {
    if (!best.set) return true;
    double tt = tie_tol * (1.0 + std::abs(best.energy));
    if (cand.energy < best.energy - tt) return true;
    if (cand.energy > best.energy + tt) return false;
    if (cand.cardinality != best.cardinality) return cand.cardinality < best.cardinality;
    return cand.added < best.added;
}

} // namespace

StepResult exhaustive_minimize(const Problem& prob, double t, const CrackState& crack_prev,
                               const Deformation* warm_start) {
    const Mesh& mesh = *prob.mesh;
    std::vector<int> candidates;
    for (int f = 0; f < mesh.n_facets(); ++f)
        if (mesh.is_brittle(f) && !crack_prev.contains(f)) candidates.push_back(f);
    int n = static_cast<int>(candidates.size());
    if (n > prob.settings.exhaustive_cap)
        throw SolverError("exhaustive search over " + std::to_string(n) +
                          " facets exceeds the configured cap");

    Candidate best;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Candidate cand;
        cand.crack = crack_prev;
        cand.added.clear();
        for (int k = 0; k < n; ++k)
            if (mask & (std::uint64_t{1} << k)) {
                cand.crack.add(candidates[k]);
                cand.added.push_back(candidates[k]);
            }
        cand.cardinality = static_cast<int>(cand.added.size());
        cand.u = solve_elastic(prob, t, cand.crack, warm_start);
        cand.breakdown = total_energy(*prob.model, mesh, t, cand.u, cand.crack);
        cand.energy = cand.breakdown.total;
        cand.set = true;
        if (better(cand, best, prob.settings.tie_tol)) best = std::move(cand);
    }

    StepResult res;
    res.u = std::move(best.u);
    res.crack = std::move(best.crack);
    res.energy = best.breakdown;
    res.euler_residual = euler_residual(prob, t, res.u, res.crack);
    res.oracle_certified = true;
    return res;
}

StepResult greedy_minimize(const Problem& prob, double t, const CrackState& crack_prev,
                           const Deformation* warm_start) {
    const Mesh& mesh = *prob.mesh;
    CrackState crack = crack_prev;
    Deformation u = solve_elastic(prob, t, crack, warm_start);
    EnergyBreakdown bd = total_energy(*prob.model, mesh, t, u, crack);

    for (int pass = 0; pass < prob.settings.greedy_max_passes; ++pass) {
        int best_f = -1;
        Deformation best_u;
        EnergyBreakdown best_bd;
        double tt = prob.settings.tie_tol * (1.0 + std::abs(bd.total));
        for (int f = 0; f < mesh.n_facets(); ++f) {
            if (!mesh.is_brittle(f) || crack.contains(f)) continue;
            CrackState trial = crack;
            trial.add(f);
            Deformation tu = solve_elastic(prob, t, trial, &u);
            EnergyBreakdown tbd = total_energy(*prob.model, mesh, t, tu, trial);
            bool improves = tbd.total < bd.total - tt;
            bool beats_best = best_f < 0 || tbd.total < best_bd.total - tt;
            if (improves && beats_best) {
                best_f = f;
                best_u = std::move(tu);
                best_bd = tbd;
            }
        }
        if (best_f < 0) break;
        crack.add(best_f);
        u = std::move(best_u);
        bd = best_bd;
    }

    StepResult res;
    res.u = std::move(u);
    res.crack = std::move(crack);
    res.energy = bd;
    res.euler_residual = euler_residual(prob, t, res.u, res.crack);
    res.oracle_certified = false;
    return res;
}

StepResult advance_step(const Problem& prob, double t_prev, double t,
                        const CrackState& crack_prev, const Deformation& u_prev) {
    StepResult res = prob.settings.strategy == SolveSettings::Strategy::exhaustive
                         ? exhaustive_minimize(prob, t, crack_prev, &u_prev)
                         : greedy_minimize(prob, t, crack_prev, &u_prev);

    // minimality witness: u_prev + psi(t) - psi(t_prev) competes under the old crack
    const Mesh& mesh = *prob.mesh;
    std::vector<double> psi_t = prob.boundary->field(mesh, t);
    std::vector<double> psi_tp = prob.boundary->field(mesh, t_prev);
    Deformation competitor = u_prev;
    for (int d = 0; d < competitor.dofs->n_dofs; ++d) {
        int v = competitor.dofs->dof_vertex[d];
        competitor.values[d] += psi_t[v] - psi_tp[v];
    }
    EnergyBreakdown comp = total_energy(*prob.model, mesh, t, competitor, crack_prev);
    res.competitor_gap = comp.total - res.energy.total;
    return res;
}

} // namespace griffith
