// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "majorant/assembly.hpp"
#include "majorant/fields.hpp"

namespace majorant::fem {

struct SolveOptions {
    double rel_tol = 1e-10;
    int max_iterations = 0;  ///< 0 means 10 * unknowns
    bool jacobi = false;     ///< diagonal preconditioning
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double relative_residual)
        : std::runtime_error(what), relative_residual_(relative_residual) {}
    double relative_residual() const { return relative_residual_; }

private:
    double relative_residual_;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

/// Conjugate gradients for an SPD matrix. Deterministic: fixed zero start,
/// serial reductions. Throws SolverError on non-convergence or on detecting
/// an indefinite matrix (nonpositive curvature).
inline std::vector<double> conjugate_gradient(const CsrMatrix& m,
                                              const std::vector<double>& rhs,
                                              const SolveOptions& opts = {},
                                              SolveStats* stats = nullptr) {
    const std::size_t size = rhs.size();
    std::vector<double> x(size, 0.0);
    const double rhs_norm = std::sqrt(detail::dot(rhs, rhs));
    if (stats) *stats = {};
    if (rhs_norm == 0.0) return x;

    std::vector<double> diag_inv;
    if (opts.jacobi) {
        diag_inv.assign(size, 1.0);
        for (int i = 0; i < m.rows; ++i) {
            const double d = m.entry(i, i);
            if (d > 0.0) diag_inv[static_cast<std::size_t>(i)] = 1.0 / d;
        }
    }

    std::vector<double> r = rhs;
    std::vector<double> z = r;
    if (opts.jacobi) {
        for (std::size_t i = 0; i < size; ++i) z[i] = diag_inv[i] * r[i];
    }
    std::vector<double> p = z;
    std::vector<double> ap(size);
    double rz = detail::dot(r, z);

    const int max_iter = opts.max_iterations > 0 ? opts.max_iterations
                                                 : 10 * static_cast<int>(size);
    double rel = 1.0;
    for (int it = 1; it <= max_iter; ++it) {
        m.multiply(p, ap);
        const double curvature = detail::dot(p, ap);
        if (!(curvature > 0.0)) {
            throw SolverError("conjugate_gradient: nonpositive curvature, matrix not SPD",
                              rel);
        }
        const double alpha = rz / curvature;
        for (std::size_t i = 0; i < size; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rel = std::sqrt(detail::dot(r, r)) / rhs_norm;
        if (stats) *stats = {it, rel};
        if (rel <= opts.rel_tol) return x;
        if (opts.jacobi) {
            for (std::size_t i = 0; i < size; ++i) z[i] = diag_inv[i] * r[i];
        } else {
            z = r;
        }
        const double rz_next = detail::dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < size; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("conjugate_gradient: no convergence after " +
                          std::to_string(max_iter) + " iterations, residual " +
                          std::to_string(rel),
                      rel);
}

/// Solves the assembled system and scatters the interior solution into a
/// nodal field with exact zeros on the boundary.
inline FeScalarField solve(const SparseSystem& system, const SolveOptions& opts = {},
                           SolveStats* stats = nullptr) {
    const std::vector<double> u = conjugate_gradient(system.matrix, system.load, opts, stats);
    FeScalarField field(*system.mesh);
    for (std::size_t k = 0; k < system.maps.interior_nodes.size(); ++k) {
        field.coefficients()[static_cast<std::size_t>(system.maps.interior_nodes[k])] = u[k];
    }
    return field;
}

}  // namespace majorant::fem
