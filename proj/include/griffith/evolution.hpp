#pragma once

/// The discrete-time quasistatic evolution: induction over a time grid,
/// the power functional theta, the cumulative-work energy audit, and the
/// grid-refinement convergence study.

#include "griffith/incremental_solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace griffith {

struct TimeGrid {
    std::vector<double> points; // 0 = t_0 < ... < t_k = T

    double T() const { return points.back(); }
    double max_step() const;
    int steps() const { return static_cast<int>(points.size()) - 1; }

    static TimeGrid uniform(double T, int steps);
    /// Inserts the midpoint of every interval (refines uniform grids exactly).
    TimeGrid halved() const;
};

struct StepRecord {
    double time = 0.0;
    CrackState crack;
    EnergyBreakdown energy;
    double theta = 0.0; // power functional at this step (right-endpoint evaluation)
    double cumulative_work = 0.0;
    double competitor_gap = 0.0;
    double euler_residual = 0.0;
    bool oracle_certified = false;
    std::vector<double> u_values; // dof values under this step's crack
};

struct EvolutionTrace {
    std::vector<StepRecord> steps; // index 0 is the initial configuration
    std::vector<std::string> warnings;

    /// Rebuilds the deformation stored at a step.
    Deformation deformation_at(const Mesh& mesh, int step) const;
};

/// The five pairings/rates whose signed sum is theta; keeping the terms
/// separate makes the traction-work identity exact at the term level.
struct PowerTerms {
    double bulk_pairing = 0.0;    // <dW(grad u), grad psi_dot>
    double body_pairing = 0.0;    // <dF(t)(u), psi_dot>
    double body_rate = 0.0;       // F_dot(t)(u)
    double surface_pairing = 0.0; // <dG(t)(u), psi_dot>
    double surface_rate = 0.0;    // G_dot(t)(u)

    double theta() const {
        return bulk_pairing - body_pairing - body_rate - surface_pairing - surface_rate;
    }
    /// <g(t), psi_dot>: work of the boundary traction under psi_dot.
    double traction_work() const { return bulk_pairing - body_pairing - surface_pairing; }
};

/// Assembles the power terms at (t, u). force_time lets the load functionals
/// be evaluated at a grid time while the rates use time t (the piecewise
/// constant interpolation of the discrete evolution); by default both use t.
/// rate_time picks where the psi/f/g slopes are sampled (right interval).
PowerTerms power_terms(const Problem& prob, double t, const Deformation& u,
                       std::optional<double> force_time = std::nullopt,
                       std::optional<double> rate_time = std::nullopt);

double theta(const Problem& prob, double t, const Deformation& u);
double boundary_traction_work(const Problem& prob, double t, const Deformation& u);

/// Runs the induction: step 0 minimizes at t = 0 over cracks containing
/// gamma0 (or takes the provided u0, warning if it is not minimal), then one
/// incremental step per grid interval. Cracks are nondecreasing along the
/// trace by construction.
EvolutionTrace run_evolution(const Problem& prob, const TimeGrid& grid, const CrackState& gamma0,
                             const Deformation* u0 = nullptr);

struct AuditReport {
    std::vector<double> upper_gap; // E_i - E_0 - cumulative_work_i, per step
    double max_upper_gap = 0.0;    // signed max
    double balance_defect = 0.0;   // max |upper_gap|
    double balance_defect_excl_jumps = 0.0; // same, skipping steps where the crack grew
    bool certified = false;        // every step oracle-certified
    double min_competitor_gap = 0.0;
};

/// Recomputes the cumulative work in the exact discrete-sum form (no time
/// quadrature) and reports the per-step gaps.
AuditReport energy_audit(const Problem& prob, const TimeGrid& grid, const EvolutionTrace& trace);

struct ConvergenceLevel {
    double delta = 0.0;                  // grid mesh size
    std::vector<double> elastic_at_probe;
    std::vector<double> crack_at_probe;
    std::vector<double> total_at_probe;
    std::vector<double> theta_series;    // theta at each grid point
};

struct ConvergenceReport {
    std::vector<double> probe_times;
    std::vector<ConvergenceLevel> levels; // base grid first, then halvings
    std::vector<double> theta_l1_diff;    // L1([0,T]) distance of consecutive theta_k
    // |level j+1 - level j| of the elastic energy per probe, flattened per level pair
    std::vector<std::vector<double>> elastic_succ_diff;
};

/// Runs the evolution on the base grid and n_refinements halvings and
/// compares elastic/crack energies at the probe times plus the theta_k
/// functions in L1.
ConvergenceReport convergence_study(const Problem& prob, const TimeGrid& base_grid,
                                    int n_refinements, const std::vector<double>& probe_times,
                                    const CrackState& gamma0);

/// Default probes {T/4, T/2, 3T/4, T}, nudged off any neighborhood of a
/// detected crack-growth time (the energy is discontinuous there).
std::vector<double> default_probe_times(const Problem& prob, const TimeGrid& base_grid,
                                        const CrackState& gamma0);

/// Exact L1([0,T]) distance between the piecewise-constant theta_k functions
/// of two traces (the grids and load knots induce the breakpoints).
double theta_l1_distance(const Problem& prob, const TimeGrid& grid_a, const EvolutionTrace& a,
                         const TimeGrid& grid_b, const EvolutionTrace& b);

} // namespace griffith
