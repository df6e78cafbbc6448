// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "majorant/assembly.hpp"
#include "majorant/estimators.hpp"
#include "majorant/fields.hpp"
#include "majorant/manufactured.hpp"
#include "majorant/mesh.hpp"
#include "majorant/quadrature.hpp"
#include "majorant/solver.hpp"

namespace majorant::verification {

/// Error norms (not squared): energy |||u - u_fem||| and L2 |u - u_fem|_0.
struct ErrorPair {
    double energy = 0.0;
    double l2 = 0.0;
};

/// True error by order-6 quadrature against the analytic u and grad u.
inline ErrorPair true_error(const ManufacturedCase& mc, const fem::FeScalarField& u_fem,
                            int quad_order = 6) {
    const Mesh& mesh = u_fem.mesh();
    const fem::ProblemSpec& p = mc.problem;
    double energy_sq = 0.0;
    double l2_sq = 0.0;
    const auto rule = triangle_rule(quad_order);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const Vec2 p0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
        const Vec2 p1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
        const Vec2 p2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
        const double area = element_geometry(mesh, t).area;
        const Vec2 gh = u_fem.gradient(t);
        double e_local = 0.0;
        double l_local = 0.0;
        for (const TriQuadPoint& q : rule) {
            const Vec2 x = q.l1 * p0 + q.l2 * p1 + q.l3 * p2;
            const Vec2 ge = mc.grad_u(x) - gh;
            const double ev = mc.u(x) - u_fem.value(t, x);
            e_local += q.w * (dot(p.A * ge, ge) + p.sigma * ev * ev);
            l_local += q.w * ev * ev;
        }
        energy_sq += area * e_local;
        l2_sq += area * l_local;
    }
    return {std::sqrt(std::max(energy_sq, 0.0)), std::sqrt(std::max(l2_sq, 0.0))};
}

/// Least-squares slope of log(value) against log(h). Needs at least three
/// (h, value) pairs, all positive.
inline double convergence_rate(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) {
        throw std::invalid_argument("convergence_rate: need at least 3 (h, value) pairs");
    }
    std::vector<double> lx, ly;
    lx.reserve(pairs.size());
    ly.reserve(pairs.size());
    for (const auto& [h, value] : pairs) {
        if (!(h > 0.0) || !(value > 0.0)) {
            throw std::invalid_argument("convergence_rate: h and values must be positive");
        }
        lx.push_back(std::log(h));
        ly.push_back(std::log(value));
    }
    const double n = static_cast<double>(pairs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

/// Smallest generalized eigenvalue of (stiffness, mass) on interior nodes by
/// inverse power iteration with CG inner solves. Deterministic all-ones start.
inline double discrete_lambda1(const Mesh& mesh, double rel_tol = 1e-8,
                               int max_iterations = 500) {
    const fem::DirichletMaps maps = fem::interior_maps(mesh);
    const fem::CsrMatrix k = fem::assemble_operator(mesh, Matrix2::identity(), 1.0, 0.0, maps);
    const fem::CsrMatrix m = fem::assemble_operator(mesh, Matrix2::identity(), 0.0, 1.0, maps);
    const std::size_t size = maps.interior_nodes.size();
    if (size == 0) {
        throw std::invalid_argument("discrete_lambda1: mesh has no interior nodes");
    }
    std::vector<double> x(size, 1.0);
    std::vector<double> mx(size), my(size);
    fem::SolveOptions cg;
    cg.rel_tol = 1e-12;
    double lambda_prev = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        m.multiply(x, mx);
        const std::vector<double> y = fem::conjugate_gradient(k, mx, cg);
        m.multiply(y, my);
        const double ymy = fem::detail::dot(y, my);
        const double lambda = fem::detail::dot(y, mx) / ymy;  // y'Ky / y'My up to CG tol
        const double scale = 1.0 / std::sqrt(ymy);
        for (std::size_t i = 0; i < size; ++i) x[i] = y[i] * scale;
        if (it > 1 && std::abs(lambda - lambda_prev) <= rel_tol * std::abs(lambda)) {
            return lambda;
        }
        lambda_prev = lambda;
    }
    throw std::runtime_error("discrete_lambda1: no convergence after " +
                             std::to_string(max_iterations) + " iterations");
}

/// One sweep point: errors plus every estimator's report.
struct RunRecord {
    std::string case_name;
    int n = 0;
    double h = 0.0;
    double sigma = 0.0;
    std::string sigma_star_policy;
    double energy_error = 0.0;
    double l2_error = 0.0;
    std::vector<estimators::MajorantReport> reports;
};

/// sqrt(majorant total) over the true energy error; >= 1 for a sharp
/// guaranteed bound.
inline double effectivity(const estimators::MajorantReport& report, double energy_error) {
    return std::sqrt(report.total) / energy_error;
}

}  // namespace majorant::verification
