#pragma once

/// Single-time minimization: the elastic problem at a fixed crack, and the
/// incremental crack-plus-deformation problem over supersets of the previous
/// crack, solved exactly by exhaustive enumeration or approximately by a
/// greedy single-facet strategy.

#include "griffith/boundary.hpp"
#include "griffith/energy.hpp"

#include <optional>
#include <string>

namespace griffith {

struct SolveSettings {
    enum class Strategy { exhaustive, greedy };
    Strategy strategy = Strategy::exhaustive;

    double elastic_tol = 1e-10; // Euler-residual tolerance; 1e-8 is apt for p != 2
    int max_newton_iters = 100;
    int greedy_max_passes = 100;
    int exhaustive_cap = 20; // max facets outside the previous crack
    // A crack can isolate a piece of the body from the Dirichlet data; with
    // eps = 0 the elastic problem is then singular. Default: error. When set,
    // zero-net-load floating pieces are pinned at their warm-start value
    // (outside the model's hypotheses, but useful during enumeration).
    bool allow_floating = false;
    // Energy tie tolerance for deterministic crack selection.
    double tie_tol = 1e-12;
};

/// Immutable problem bundle shared by solver and driver.
struct Problem {
    const Mesh* mesh = nullptr;
    const EnergyModel* model = nullptr;
    const BoundaryDeformation* boundary = nullptr;
    SolveSettings settings;
};

struct StepResult {
    Deformation u;
    CrackState crack;
    EnergyBreakdown energy;
    double euler_residual = 0.0;
    // E(t)(u_prev + psi_i - psi_{i-1}, Gamma_prev) - E(t)(u, Gamma); the
    // per-step minimality witness, >= -1e-12 for a correct minimizer.
    double competitor_gap = 0.0;
    bool oracle_certified = false;
};

/// Minimizer of the elastic energy over AD(psi(t), crack). One Newton step
/// suffices for p = 2, eps = 0; otherwise damped Newton to elastic_tol.
/// Throws SolverError on floating components (see SolveSettings) and on
/// Newton failure.
Deformation solve_elastic(const Problem& prob, double t, const CrackState& crack,
                          const Deformation* warm_start = nullptr);

/// max over dof basis fields v in AD(0, crack) of
/// |<dW(grad u), grad v> - <dF(t)(u), v> - <dG(t)(u), v>|.
double euler_residual(const Problem& prob, double t, const Deformation& u,
                      const CrackState& crack);

/// Global minimizer over all crack supersets, by enumeration (certified).
/// Tie-break: smaller energy, then smaller cardinality, then lexicographic
/// facet order. Throws SolverError when the number of candidate facets
/// exceeds settings.exhaustive_cap.
StepResult exhaustive_minimize(const Problem& prob, double t, const CrackState& crack_prev,
                               const Deformation* warm_start = nullptr);

/// Scalable surrogate: repeatedly commits the single best strictly
/// energy-decreasing facet. Result energy >= the exhaustive result's energy.
StepResult greedy_minimize(const Problem& prob, double t, const CrackState& crack_prev,
                           const Deformation* warm_start = nullptr);

/// One incremental step at time t from (u_prev, crack_prev) at time t_prev:
/// runs the configured strategy and fills in the competitor gap.
StepResult advance_step(const Problem& prob, double t_prev, double t,
                        const CrackState& crack_prev, const Deformation& u_prev);

} // namespace griffith
