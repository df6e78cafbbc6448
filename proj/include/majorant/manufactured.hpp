// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "majorant/geometry.hpp"
#include "majorant/problem.hpp"

namespace majorant::verification {

/// Analytic exact solution with the induced source f = -div(A grad u) + sigma u.
struct ManufacturedCase {
    std::string name;
    fem::ProblemSpec problem;
    std::function<double(Vec2)> u;
    std::function<Vec2(Vec2)> grad_u;
};

/// Known cases on the unit square, all vanishing on the boundary:
///   sinsin  u = sin(pi x) sin(pi y), A = I
///   bubble  u = x(1-x) y(1-y),       A = I
///   aniso   u = sin(pi x) sin(pi y), A = [[2, 0.5], [0.5, 1]]
inline ManufacturedCase manufactured(const std::string& name, double sigma) {
    constexpr double pi = std::numbers::pi;
    if (name == "sinsin") {
        auto u = [](Vec2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
        auto grad = [](Vec2 p) {
            return Vec2{pi * std::cos(pi * p.x) * std::sin(pi * p.y),
                        pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
        };
        auto f = [sigma, u](Vec2 p) { return (2.0 * pi * pi + sigma) * u(p); };
        return {name, fem::ProblemSpec(Matrix2::identity(), sigma, f), u, grad};
    }
    if (name == "bubble") {
        auto u = [](Vec2 p) { return p.x * (1.0 - p.x) * p.y * (1.0 - p.y); };
        auto grad = [](Vec2 p) {
            return Vec2{(1.0 - 2.0 * p.x) * p.y * (1.0 - p.y),
                        p.x * (1.0 - p.x) * (1.0 - 2.0 * p.y)};
        };
        auto f = [sigma, u](Vec2 p) {
            return 2.0 * (p.x * (1.0 - p.x) + p.y * (1.0 - p.y)) + sigma * u(p);
        };
        return {name, fem::ProblemSpec(Matrix2::identity(), sigma, f), u, grad};
    }
    if (name == "aniso") {
        const Matrix2 A{2.0, 0.5, 0.5, 1.0};
        auto u = [](Vec2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
        auto grad = [](Vec2 p) {
            return Vec2{pi * std::cos(pi * p.x) * std::sin(pi * p.y),
                        pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
        };
        // -div(A grad u) = 3 pi^2 sin sin - pi^2 cos cos for this A.
        auto f = [sigma](Vec2 p) {
            const double ss = std::sin(pi * p.x) * std::sin(pi * p.y);
            const double cc = std::cos(pi * p.x) * std::cos(pi * p.y);
            return 3.0 * pi * pi * ss - pi * pi * cc + sigma * ss;
        };
        return {name, fem::ProblemSpec(A, sigma, f), u, grad};
    }
    throw std::invalid_argument("manufactured: unknown case '" + name + "'");
}

}  // namespace majorant::verification
