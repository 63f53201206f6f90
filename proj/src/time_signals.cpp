#include "griffith/time_signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace griffith {

namespace {

// Interval index i with knots[i] <= t < knots[i+1]; at t = T the last interval.
int interval_of(const std::vector<double>& knots, double t) {
    double tol = 1e-12 * (1.0 + std::abs(knots.back()));
    if (t < knots.front() - tol || t > knots.back() + tol)
        throw std::out_of_range("time outside the trajectory span");
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    int i = static_cast<int>(it - knots.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(knots.size()) - 2);
}

} // namespace

std::vector<double> Trajectory::eval(double t) const {
    if (knots.size() == 1) return snapshots[0];
    int i = interval_of(knots, t);
    double w = (t - knots[i]) / (knots[i + 1] - knots[i]);
    std::vector<double> out(snapshots[i].size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (1.0 - w) * snapshots[i][k] + w * snapshots[i + 1][k];
    return out;
}

std::vector<double> Trajectory::rate(double t) const {
    std::vector<double> out(field_size(), 0.0);
    if (knots.size() <= 1) return out;
    int i = interval_of(knots, t);
    double dt = knots[i + 1] - knots[i];
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (snapshots[i + 1][k] - snapshots[i][k]) / dt;
    return out;
}

Trajectory Trajectory::constant(double T, std::vector<double> field) {
    Trajectory tr;
    tr.knots = {0.0, T};
    tr.snapshots = {field, field};
    return tr;
}

void Trajectory::validate() const {
    if (knots.empty()) throw std::runtime_error("trajectory has no knots");
    if (knots.front() != 0.0) throw std::runtime_error("trajectory must start at t = 0");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1])) throw std::runtime_error("trajectory knots not increasing");
    if (snapshots.size() != knots.size())
        throw std::runtime_error("trajectory needs one snapshot per knot");
    for (const auto& s : snapshots)
        if (s.size() != snapshots[0].size())
            throw std::runtime_error("trajectory snapshots differ in size");
}

double Subdivision::max_step() const {
    double m = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) m = std::max(m, points[i] - points[i - 1]);
    return m;
}

Subdivision shifted_grid_subdivision(int m, double shift, double a, double b) {
    Subdivision sub;
    sub.points.push_back(a);
    long long i0 = static_cast<long long>(std::floor((a - shift) * m)) - 1;
    long long i1 = static_cast<long long>(std::ceil((b - shift) * m)) + 1;
    for (long long i = i0; i <= i1; ++i) {
        double t = shift + static_cast<double>(i) / m;
        if (t > a && t < b) sub.points.push_back(t);
    }
    sub.points.push_back(b);
    return sub;
}

RiemannDefect riemann_defect(const std::function<double(double)>& f, const Subdivision& sub,
                             int oversample) {
    RiemannDefect d;
    double riemann = 0.0, integral = 0.0;
    for (int i = 1; i < static_cast<int>(sub.points.size()); ++i) {
        double t0 = sub.points[i - 1], t1 = sub.points[i];
        double len = t1 - t0;
        double ref = 0.0;
        for (int j = 0; j < oversample; ++j) ref += f(t0 + (j + 0.5) * len / oversample);
        ref *= len / oversample;
        double tagged = len * f(t1);
        riemann += tagged;
        integral += ref;
        d.strong_defect += std::abs(tagged - ref);
    }
    d.sum_error = std::abs(riemann - integral);
    return d;
}

ShiftSearchResult best_shift(const std::function<double(double)>& f, int m, double a, double b,
                             int n_shifts, int oversample) {
    ShiftSearchResult best{0.0, std::numeric_limits<double>::infinity()};
    for (int j = 0; j < n_shifts; ++j) {
        // shifting by 1/m reproduces the grid, so [0, 1/m) covers all of them
        double s = (static_cast<double>(j) / n_shifts) / m;
        double defect = riemann_defect(f, shifted_grid_subdivision(m, s, a, b), oversample)
                            .strong_defect;
        if (defect < best.strong_defect) best = {s, defect};
    }
    return best;
}

ShiftSearchResult best_shift_battery(const std::vector<std::function<double(double)>>& fs, int m,
                                     double a, double b, int n_shifts, int oversample) {
    // weights mirror the summable-norm trick that handles countably many
    // functions at once: 2^{-j} * defect_j / ||f_j||_1
    std::vector<double> l1(fs.size(), 0.0);
    int fine = 10 * m * oversample;
    for (std::size_t j = 0; j < fs.size(); ++j) {
        double s = 0.0;
        for (int i = 0; i < fine; ++i) s += std::abs(fs[j](a + (i + 0.5) * (b - a) / fine));
        l1[j] = std::max(s * (b - a) / fine, 1e-300);
    }
    ShiftSearchResult best{0.0, std::numeric_limits<double>::infinity()};
    for (int jj = 0; jj < n_shifts; ++jj) {
        double s = (static_cast<double>(jj) / n_shifts) / m;
        Subdivision sub = shifted_grid_subdivision(m, s, a, b);
        double score = 0.0;
        for (std::size_t j = 0; j < fs.size(); ++j)
            score += std::pow(2.0, -static_cast<double>(j)) *
                     riemann_defect(fs[j], sub, oversample).strong_defect / l1[j];
        if (score < best.strong_defect) best = {s, score};
    }
    return best;
}

} // namespace griffith
