// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>

namespace majorant {

/// 2D point / vector with value semantics.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return s * a; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product of (a, 0) and (b, 0).
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Dense 2x2 matrix. Row-major storage; symmetry is validated where required,
/// not enforced by the type.
struct Matrix2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Matrix2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    constexpr Vec2 operator*(Vec2 v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }

    constexpr double det() const { return a11 * a22 - a12 * a21; }

    constexpr Matrix2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    constexpr double symmetry_gap() const { return a12 > a21 ? a12 - a21 : a21 - a12; }

    constexpr bool is_identity(double tol = 1e-14) const {
        auto near = [tol](double v, double w) { return (v > w ? v - w : w - v) <= tol; };
        return near(a11, 1.0) && near(a22, 1.0) && near(a12, 0.0) && near(a21, 0.0);
    }
};

/// Eigenvalues of a symmetric 2x2 matrix, ascending. Caller guarantees symmetry.
struct EigenPair {
    double min = 0.0;
    double max = 0.0;
};

inline EigenPair symmetric_eigenvalues(const Matrix2& m) {
    const double mean = 0.5 * (m.a11 + m.a22);
    const double half_gap = 0.5 * (m.a11 - m.a22);
    const double r = std::sqrt(half_gap * half_gap + m.a12 * m.a21);
    return {mean - r, mean + r};
}

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
    double x0 = 0.0, y0 = 0.0;
    double x1 = 1.0, y1 = 1.0;

    constexpr double width() const { return x1 - x0; }
    constexpr double height() const { return y1 - y0; }
    constexpr double area() const { return width() * height(); }

    friend constexpr bool operator==(const Rect&, const Rect&) = default;

    static constexpr Rect unit_square() { return {0.0, 0.0, 1.0, 1.0}; }
};

}  // namespace majorant
