#pragma once

#include <array>
#include <cmath>

namespace rqm {

using Vec2 = std::array<double, 2>;
/// Row-major 2x2 matrix.
using Mat2 = std::array<Vec2, 2>;

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }
inline Vec2 operator-(const Vec2& a) { return {-a[0], -a[1]}; }

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Counter-clockwise quarter turn.
inline Vec2 perp(const Vec2& a) { return {-a[1], a[0]}; }

inline double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

inline Vec2 mul(const Mat2& m, const Vec2& x)
{
    return {m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]};
}

/// Solves m x = rhs by Cramer's rule; caller checks det.
inline Vec2 solve(const Mat2& m, const Vec2& rhs)
{
    const double d = det(m);
    return {(rhs[0] * m[1][1] - m[0][1] * rhs[1]) / d, (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / d};
}

inline double max_abs(const Mat2& m)
{
    double r = 0.0;
    for (const auto& row : m)
        for (double x : row) r = std::fmax(r, std::fabs(x));
    return r;
}

}  // namespace rqm
