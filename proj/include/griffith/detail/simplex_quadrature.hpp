#pragma once

/// Closed-form integrals of powers of affine functions over simplices, via
/// the classical barycentric monomial formula, plus the 3-point Gauss
/// fallback used for non-even exponents.

#include <cmath>
#include <cstdlib>

namespace griffith::detail {

inline bool is_even_integer(double s) {
    double r = std::round(s);
    return std::abs(s - r) < 1e-12 && static_cast<long long>(r) % 2 == 0 && r >= 0;
}

inline bool is_nonneg_integer(double s) {
    double r = std::round(s);
    return std::abs(s - r) < 1e-12 && r >= 0;
}

/// Integral of u^s over a simplex, u affine with corner values v[0..dim], s >= 0 integer.
inline double simplex_int_pow(int dim, double measure, const double* v, int s) {
    if (s == 0) return measure;
    if (dim == 1) {
        // measure/(s+1) * sum_{i+j=s} a^i b^j
        double sum = 0.0;
        double ai = 1.0;
        for (int i = 0; i <= s; ++i) {
            sum += ai * std::pow(v[1], s - i);
            ai *= v[0];
        }
        return measure / (s + 1) * sum;
    }
    // 2*measure/((s+1)(s+2)) * sum_{i+j+k=s} a^i b^j c^k
    double sum = 0.0;
    double ai = 1.0;
    for (int i = 0; i <= s; ++i) {
        double bj = 1.0;
        for (int j = 0; j <= s - i; ++j) {
            sum += ai * bj * std::pow(v[2], s - i - j);
            bj *= v[1];
        }
        ai *= v[0];
    }
    return 2.0 * measure / ((s + 1.0) * (s + 2.0)) * sum;
}

/// Integral of lambda_sh * u^s over a simplex (one extra shape-function factor).
inline double simplex_int_pow_shape(int dim, double measure, const double* v, int s, int sh) {
    if (dim == 1) {
        double sum = 0.0;
        double ai = 1.0;
        for (int i = 0; i <= s; ++i) {
            int alpha[2] = {i, s - i};
            sum += (alpha[sh] + 1) * ai * std::pow(v[1], s - i);
            ai *= v[0];
        }
        return measure / ((s + 1.0) * (s + 2.0)) * sum;
    }
    double sum = 0.0;
    double ai = 1.0;
    for (int i = 0; i <= s; ++i) {
        double bj = 1.0;
        for (int j = 0; j <= s - i; ++j) {
            int alpha[3] = {i, j, s - i - j};
            sum += (alpha[sh] + 1) * ai * bj * std::pow(v[2], s - i - j);
            bj *= v[1];
        }
        ai *= v[0];
    }
    return 2.0 * measure / ((s + 1.0) * (s + 2.0) * (s + 3.0)) * sum;
}

/// Integral of lambda_sh1 * lambda_sh2 * u^s over a simplex.
inline double simplex_int_pow_2shapes(int dim, double measure, const double* v, int s, int sh1,
                                      int sh2) {
    auto corner_factor = [&](const int* alpha) -> double {
        if (sh1 == sh2) return (alpha[sh1] + 1.0) * (alpha[sh1] + 2.0);
        return (alpha[sh1] + 1.0) * (alpha[sh2] + 1.0);
    };
    if (dim == 1) {
        double sum = 0.0;
        double ai = 1.0;
        for (int i = 0; i <= s; ++i) {
            int alpha[2] = {i, s - i};
            sum += corner_factor(alpha) * ai * std::pow(v[1], s - i);
            ai *= v[0];
        }
        return measure / ((s + 1.0) * (s + 2.0) * (s + 3.0)) * sum;
    }
    double sum = 0.0;
    double ai = 1.0;
    for (int i = 0; i <= s; ++i) {
        double bj = 1.0;
        for (int j = 0; j <= s - i; ++j) {
            int alpha[3] = {i, j, s - i - j};
            sum += corner_factor(alpha) * ai * bj * std::pow(v[2], s - i - j);
            bj *= v[1];
        }
        ai *= v[0];
    }
    return 2.0 * measure / ((s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0)) * sum;
}

struct QuadPoint {
    double lambda[3];
    double weight; // of the measure
};

/// Fixed fallback rule: 3-point Gauss in 1D (degree 5), edge midpoints in 2D (degree 2).
inline int gauss3_points(int dim, QuadPoint* pts) {
    if (dim == 1) {
        const double g = std::sqrt(3.0 / 5.0);
        const double x[3] = {0.5 * (1 - g), 0.5, 0.5 * (1 + g)};
        const double w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        for (int i = 0; i < 3; ++i) pts[i] = {{1 - x[i], x[i], 0.0}, w[i]};
        return 3;
    }
    pts[0] = {{0.5, 0.5, 0.0}, 1.0 / 3.0};
    pts[1] = {{0.0, 0.5, 0.5}, 1.0 / 3.0};
    pts[2] = {{0.5, 0.0, 0.5}, 1.0 / 3.0};
    return 3;
}

/// Integral of |u|^s over a simplex: exact when s is an even integer,
/// 3-point Gauss otherwise.
inline double simplex_int_abs_pow(int dim, double measure, const double* v, double s) {
    if (is_even_integer(s)) return simplex_int_pow(dim, measure, v, static_cast<int>(std::round(s)));
    QuadPoint pts[3];
    int n = gauss3_points(dim, pts);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = 0.0;
        for (int c = 0; c <= dim; ++c) u += pts[i].lambda[c] * v[c];
        sum += pts[i].weight * std::pow(std::abs(u), s);
    }
    return measure * sum;
}

/// Integral of |u|^{s-1} u * lambda_sh (odd signed power times a shape function);
/// exact when s is odd so that |u|^{s-1} u == u^s.
inline double simplex_int_signed_pow_shape(int dim, double measure, const double* v, double s,
                                           int sh) {
    if (is_nonneg_integer(s) && static_cast<long long>(std::round(s)) % 2 == 1)
        return simplex_int_pow_shape(dim, measure, v, static_cast<int>(std::round(s)), sh);
    QuadPoint pts[3];
    int n = gauss3_points(dim, pts);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = 0.0;
        for (int c = 0; c <= dim; ++c) u += pts[i].lambda[c] * v[c];
        double su = (u == 0.0) ? 0.0 : std::pow(std::abs(u), s - 1) * u;
        sum += pts[i].weight * su * pts[i].lambda[sh];
    }
    return measure * sum;
}

/// Integral of |u|^s * lambda_sh1 * lambda_sh2 (even power times two shapes).
inline double simplex_int_abs_pow_2shapes(int dim, double measure, const double* v, double s,
                                          int sh1, int sh2) {
    if (is_even_integer(s))
        return simplex_int_pow_2shapes(dim, measure, v, static_cast<int>(std::round(s)), sh1, sh2);
    QuadPoint pts[3];
    int n = gauss3_points(dim, pts);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = 0.0;
        for (int c = 0; c <= dim; ++c) u += pts[i].lambda[c] * v[c];
        sum += pts[i].weight * std::pow(std::abs(u), s) * pts[i].lambda[sh1] * pts[i].lambda[sh2];
    }
    return measure * sum;
}

} // namespace griffith::detail
