#include "griffith/evolution.hpp"

#include "griffith/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace griffith {

double TimeGrid::max_step() const {
    double m = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) m = std::max(m, points[i] - points[i - 1]);
    return m;
}

TimeGrid TimeGrid::uniform(double T, int steps) {
    TimeGrid g;
    g.points.resize(steps + 1);
    for (int i = 0; i <= steps; ++i) g.points[i] = T * (static_cast<double>(i) / steps);
    return g;
}

TimeGrid TimeGrid::halved() const {
    TimeGrid g;
    g.points.reserve(points.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        g.points.push_back(points[i]);
        g.points.push_back(0.5 * (points[i] + points[i + 1]));
    }
    g.points.push_back(points.back());
    return g;
}

Deformation EvolutionTrace::deformation_at(const Mesh& mesh, int step) const {
    const StepRecord& rec = steps[step];
    auto dofs = std::make_shared<const DofMap>(assemble_dof_map(mesh, rec.crack));
    Deformation u;
    u.mesh = &mesh;
    u.dofs = dofs;
    u.values = Eigen::Map<const Eigen::VectorXd>(rec.u_values.data(), rec.u_values.size());
    if (u.values.size() != dofs->n_dofs) throw SolverError("trace step has wrong dof count");
    return u;
}

PowerTerms power_terms(const Problem& prob, double t, const Deformation& u,
                       std::optional<double> force_time, std::optional<double> rate_time) {
    const Mesh& mesh = *prob.mesh;
    const EnergyModel& model = *prob.model;
    double ft = force_time.value_or(t);
    double rt = rate_time.value_or(t);

    std::vector<double> psi_dot_vertex = prob.boundary->rate_field(mesh, rt);
    Deformation psi_dot = interpolate_vertex_field(mesh, u.dofs, psi_dot_vertex);

    PowerTerms pt;
    pt.bulk_pairing = bulk_diff_pairing(model.bulk, u, psi_dot);
    pt.body_pairing = body_diff_pairing(model.body, mesh, ft, u, psi_dot);
    pt.body_rate = body_rate(model.body, mesh, rt, u);
    pt.surface_pairing = surface_diff_pairing(model.surface, mesh, ft, u, psi_dot);
    pt.surface_rate = surface_rate(model.surface, mesh, rt, u);
    return pt;
}

double theta(const Problem& prob, double t, const Deformation& u) {
    return power_terms(prob, t, u).theta();
}

double boundary_traction_work(const Problem& prob, double t, const Deformation& u) {
    return power_terms(prob, t, u).traction_work();
}

namespace {

// One term of the discrete-sum form of the cumulative work: everything is
// evaluated at the two grid times, no time quadrature enters.
double work_increment(const Problem& prob, double t0, double t1, const Deformation& u_prev) {
    const Mesh& mesh = *prob.mesh;
    const EnergyModel& model = *prob.model;
    std::vector<double> d_psi = prob.boundary->field(mesh, t1);
    {
        std::vector<double> prev = prob.boundary->field(mesh, t0);
        for (std::size_t i = 0; i < d_psi.size(); ++i) d_psi[i] -= prev[i];
    }
    Deformation dpsi = interpolate_vertex_field(mesh, u_prev.dofs, d_psi);

    double w = bulk_diff_pairing(model.bulk, u_prev, dpsi);
    w -= body_diff_pairing(model.body, mesh, t0, u_prev, dpsi);
    w -= body_work(model.body, mesh, t1, u_prev) - body_work(model.body, mesh, t0, u_prev);
    w -= surface_diff_pairing(model.surface, mesh, t0, u_prev, dpsi);
    w -= surface_work(model.surface, mesh, t1, u_prev) -
         surface_work(model.surface, mesh, t0, u_prev);
    return w;
}

StepRecord make_record(const Problem& prob, double t, const StepResult& res, double cumulative) {
    if (!std::isfinite(res.energy.total))
        throw SolverError("non-finite energy at t = " + std::to_string(t));
    StepRecord rec;
    rec.time = t;
    rec.crack = res.crack;
    rec.energy = res.energy;
    rec.theta = theta(prob, t, res.u);
    rec.cumulative_work = cumulative;
    rec.competitor_gap = res.competitor_gap;
    rec.euler_residual = res.euler_residual;
    rec.oracle_certified = res.oracle_certified;
    rec.u_values.assign(res.u.values.data(), res.u.values.data() + res.u.values.size());
    return rec;
}

} // namespace

EvolutionTrace run_evolution(const Problem& prob, const TimeGrid& grid, const CrackState& gamma0,
                             const Deformation* u0) {
    const Mesh& mesh = *prob.mesh;
    EvolutionTrace trace;

    StepResult init;
    if (u0) {
        init.u = *u0;
        init.crack = gamma0;
        init.energy = total_energy(*prob.model, mesh, 0.0, *u0, gamma0);
        init.euler_residual = euler_residual(prob, 0.0, *u0, gamma0);
        init.oracle_certified = false;
        // the initial pair must be a minimum energy configuration at t = 0
        StepResult check = prob.settings.strategy == SolveSettings::Strategy::exhaustive
                               ? exhaustive_minimize(prob, 0.0, gamma0, u0)
                               : greedy_minimize(prob, 0.0, gamma0, u0);
        if (init.energy.total > check.energy.total + 1e-10 * (1.0 + std::abs(check.energy.total))) {
            std::ostringstream os;
            os << "initial configuration is not minimal at t = 0: E = " << init.energy.total
               << " exceeds " << check.energy.total;
            trace.warnings.push_back(os.str());
        }
    } else {
        init = prob.settings.strategy == SolveSettings::Strategy::exhaustive
                   ? exhaustive_minimize(prob, 0.0, gamma0, nullptr)
                   : greedy_minimize(prob, 0.0, gamma0, nullptr);
    }
    trace.steps.push_back(make_record(prob, 0.0, init, 0.0));

    CrackState crack = init.crack;
    Deformation u = init.u;
    double cumulative = 0.0;
    for (int i = 1; i < static_cast<int>(grid.points.size()); ++i) {
        double t0 = grid.points[i - 1], t1 = grid.points[i];
        StepResult res = advance_step(prob, t0, t1, crack, u);
        cumulative += work_increment(prob, t0, t1, u);
        trace.steps.push_back(make_record(prob, t1, res, cumulative));
        if (res.competitor_gap < -1e-12) {
            std::ostringstream os;
            os << "step " << i << ": competitor gap " << res.competitor_gap
               << " violates per-step minimality";
            trace.warnings.push_back(os.str());
        }
        crack = res.crack;
        u = std::move(res.u);
    }
    return trace;
}

AuditReport energy_audit(const Problem& prob, const TimeGrid& grid, const EvolutionTrace& trace) {
    const Mesh& mesh = *prob.mesh;
    if (trace.steps.size() != grid.points.size())
        throw SolverError("audit needs the grid the trace was produced on");
    AuditReport rep;
    rep.certified = true;
    rep.min_competitor_gap = 0.0;

    double E0 = trace.steps[0].energy.total;
    double cumulative = 0.0;
    rep.upper_gap.assign(trace.steps.size(), 0.0);
    Deformation u_prev = trace.deformation_at(mesh, 0);
    for (std::size_t i = 1; i < trace.steps.size(); ++i) {
        cumulative += work_increment(prob, grid.points[i - 1], grid.points[i], u_prev);
        rep.upper_gap[i] = trace.steps[i].energy.total - E0 - cumulative;
        u_prev = trace.deformation_at(mesh, static_cast<int>(i));
    }
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const StepRecord& rec = trace.steps[i];
        rep.max_upper_gap = std::max(rep.max_upper_gap, rep.upper_gap[i]);
        rep.balance_defect = std::max(rep.balance_defect, std::abs(rep.upper_gap[i]));
        bool crack_grew = i > 0 && rec.crack.count > trace.steps[i - 1].crack.count;
        if (!crack_grew)
            rep.balance_defect_excl_jumps =
                std::max(rep.balance_defect_excl_jumps, std::abs(rep.upper_gap[i]));
        rep.certified = rep.certified && rec.oracle_certified;
        rep.min_competitor_gap = std::min(rep.min_competitor_gap, rec.competitor_gap);
    }
    return rep;
}

namespace {

int step_at(const TimeGrid& grid, double t) {
    // largest i with t_i <= t (piecewise constant interpolation)
    auto it = std::upper_bound(grid.points.begin(), grid.points.end(),
                               t + 1e-12 * (1.0 + std::abs(t)));
    return std::max(0, static_cast<int>(it - grid.points.begin()) - 1);
}

} // namespace

double theta_l1_distance(const Problem& prob, const TimeGrid& grid_a, const EvolutionTrace& a,
                         const TimeGrid& grid_b, const EvolutionTrace& b) {
    const Mesh& mesh = *prob.mesh;
    std::set<double> breaks(grid_a.points.begin(), grid_a.points.end());
    breaks.insert(grid_b.points.begin(), grid_b.points.end());
    auto add_knots = [&](const std::vector<double>& ks) {
        for (double k : ks)
            if (k >= grid_a.points.front() && k <= grid_a.points.back()) breaks.insert(k);
    };
    add_knots(prob.boundary->psi.knots);
    add_knots(prob.model->body.f.knots);
    add_knots(prob.model->surface.g.knots);
    std::vector<double> pts(breaks.begin(), breaks.end());

    double dist = 0.0;
    int cached_ia = -1, cached_ib = -1;
    Deformation ua, ub;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double mid = 0.5 * (pts[i] + pts[i + 1]);
        double len = pts[i + 1] - pts[i];
        if (len <= 0.0) continue;
        int ia = step_at(grid_a, mid), ib = step_at(grid_b, mid);
        if (ia != cached_ia) {
            ua = a.deformation_at(mesh, ia);
            cached_ia = ia;
        }
        if (ib != cached_ib) {
            ub = b.deformation_at(mesh, ib);
            cached_ib = ib;
        }
        double ta = power_terms(prob, mid, ua, grid_a.points[ia], mid).theta();
        double tb = power_terms(prob, mid, ub, grid_b.points[ib], mid).theta();
        dist += std::abs(ta - tb) * len;
    }
    return dist;
}

std::vector<double> default_probe_times(const Problem& prob, const TimeGrid& base_grid,
                                        const CrackState& gamma0) {
    EvolutionTrace tr = run_evolution(prob, base_grid, gamma0);
    std::vector<double> growth_times;
    for (std::size_t i = 1; i < tr.steps.size(); ++i)
        if (tr.steps[i].crack.count > tr.steps[i - 1].crack.count)
            growth_times.push_back(tr.steps[i].time);
    double T = base_grid.T();
    double delta = base_grid.max_step();
    std::vector<double> probes = {0.25 * T, 0.5 * T, 0.75 * T, T};
    for (double& p : probes) {
        for (int guard = 0; guard < 16; ++guard) {
            bool near_jump = false;
            for (double g : growth_times) near_jump = near_jump || std::abs(p - g) < 2.0 * delta;
            if (!near_jump) break;
            p = std::max(0.5 * delta, p - 2.0 * delta);
        }
    }
    return probes;
}

ConvergenceReport convergence_study(const Problem& prob, const TimeGrid& base_grid,
                                    int n_refinements, const std::vector<double>& probe_times,
                                    const CrackState& gamma0) {
    ConvergenceReport rep;
    rep.probe_times = probe_times;

    std::vector<TimeGrid> grids{base_grid};
    for (int r = 0; r < n_refinements; ++r) grids.push_back(grids.back().halved());

    std::vector<EvolutionTrace> traces;
    traces.reserve(grids.size());
    for (const auto& g : grids) {
        EvolutionTrace tr = run_evolution(prob, g, gamma0);
        ConvergenceLevel lvl;
        lvl.delta = g.max_step();
        for (double tp : probe_times) {
            int i = step_at(g, tp);
            lvl.elastic_at_probe.push_back(tr.steps[i].energy.elastic);
            lvl.crack_at_probe.push_back(tr.steps[i].energy.crack);
            lvl.total_at_probe.push_back(tr.steps[i].energy.total);
        }
        for (const auto& s : tr.steps) lvl.theta_series.push_back(s.theta);
        rep.levels.push_back(std::move(lvl));
        traces.push_back(std::move(tr));
    }

    for (std::size_t l = 0; l + 1 < grids.size(); ++l) {
        rep.theta_l1_diff.push_back(
            theta_l1_distance(prob, grids[l], traces[l], grids[l + 1], traces[l + 1]));
        std::vector<double> diffs;
        for (std::size_t k = 0; k < probe_times.size(); ++k)
            diffs.push_back(std::abs(rep.levels[l + 1].elastic_at_probe[k] -
                                     rep.levels[l].elastic_at_probe[k]));
        rep.elastic_succ_diff.push_back(std::move(diffs));
    }
    return rep;
}

} // namespace griffith
