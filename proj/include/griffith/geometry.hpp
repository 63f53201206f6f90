#pragma once

#include <array>
#include <cmath>

namespace griffith {

/// Coordinate / vector in R^n, n <= 2. Component [1] is unused in 1D.
using Point = std::array<double, 2>;

inline Point operator+(Point a, Point b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(Point a, Point b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(double s, Point a) { return {s * a[0], s * a[1]}; }

inline double dot(Point a, Point b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(Point a) { return std::sqrt(dot(a, a)); }

} // namespace griffith
