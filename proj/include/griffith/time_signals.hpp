#pragma once

/// Piecewise-linear (absolutely continuous) time trajectories of field
/// snapshots, and shifted-grid subdivisions whose tagged Riemann sums track
/// the time integrals they discretize.

#include <functional>
#include <vector>

namespace griffith {

struct Trajectory {
    std::vector<double> knots;                 // strictly increasing, spans [0, T]
    std::vector<std::vector<double>> snapshots; // one field per knot, equal sizes

    double T() const { return knots.empty() ? 0.0 : knots.back(); }
    int field_size() const { return snapshots.empty() ? 0 : static_cast<int>(snapshots[0].size()); }

    /// Linear interpolation at t in [0, T].
    std::vector<double> eval(double t) const;
    /// Interval slope; at a knot the right interval is used (left at t = T).
    std::vector<double> rate(double t) const;

    /// Constant-in-time trajectory.
    static Trajectory constant(double T, std::vector<double> field);
    void validate() const; // throws ScenarioError-free invariant check (std::runtime_error)
};

struct Subdivision {
    std::vector<double> points; // a = t0 < ... < tN = b, right-endpoint tags

    double max_step() const;
    int intervals() const { return static_cast<int>(points.size()) - 1; }
};

/// Proof construction of the Riemann-sum lemma: { a } U { s + i/m in (a,b) } U { b }.
Subdivision shifted_grid_subdivision(int m, double shift, double a, double b);

struct RiemannDefect {
    double sum_error = 0.0;     // | sum_i (t_i - t_{i-1}) f(t_i) - integral f |
    double strong_defect = 0.0; // sum_i | (t_i - t_{i-1}) f(t_i) - integral over the interval |
};

/// Reference integrals by composite midpoint quadrature at `oversample` times
/// the subdivision density (default 10, the documented oracle).
RiemannDefect riemann_defect(const std::function<double(double)>& f, const Subdivision& sub,
                             int oversample = 10);

struct ShiftSearchResult {
    double best_shift = 0.0;
    double strong_defect = 0.0;
};

/// Minimizes strong_defect over n_shifts sampled shifts in [0, 1/m); the
/// computable realization of the lemma's "there exists a sequence of
/// subdivisions".
ShiftSearchResult best_shift(const std::function<double(double)>& f, int m, double a, double b,
                             int n_shifts, int oversample = 10);

/// Simultaneous version for a finite battery: minimizes
/// sum_j 2^{-j} strong_defect_j / ||f_j||_1 over the sampled shifts.
ShiftSearchResult best_shift_battery(const std::vector<std::function<double(double)>>& fs, int m,
                                     double a, double b, int n_shifts, int oversample = 10);

} // namespace griffith
