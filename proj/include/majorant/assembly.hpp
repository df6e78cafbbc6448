// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "majorant/fields.hpp"
#include "majorant/mesh.hpp"
#include "majorant/problem.hpp"
#include "majorant/quadrature.hpp"

namespace majorant::fem {

/// Compressed sparse row matrix, full (not triangular) storage.
struct CsrMatrix {
    int rows = 0;
    std::vector<int> row_ptr;
    std::vector<int> cols;
    std::vector<double> vals;

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(static_cast<std::size_t>(rows), 0.0);
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            for (int k = row_ptr[static_cast<std::size_t>(i)];
                 k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
                s += vals[static_cast<std::size_t>(k)] *
                     x[static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])];
            }
            y[static_cast<std::size_t>(i)] = s;
        }
    }

    double entry(int i, int j) const {
        for (int k = row_ptr[static_cast<std::size_t>(i)];
             k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            if (cols[static_cast<std::size_t>(k)] == j) return vals[static_cast<std::size_t>(k)];
        }
        return 0.0;
    }
};

/// Interior-node numbering after Dirichlet elimination.
struct DirichletMaps {
    std::vector<int> interior_nodes;   ///< interior index -> node index
    std::vector<int> node_to_interior; ///< node index -> interior index, -1 on the boundary
};

inline DirichletMaps interior_maps(const Mesh& mesh) {
    DirichletMaps maps;
    maps.node_to_interior.assign(mesh.nodes.size(), -1);
    for (int i = 0; i < mesh.node_count(); ++i) {
        if (!mesh.boundary_mask[static_cast<std::size_t>(i)]) {
            maps.node_to_interior[static_cast<std::size_t>(i)] =
                static_cast<int>(maps.interior_nodes.size());
            maps.interior_nodes.push_back(i);
        }
    }
    return maps;
}

/// Element stiffness for the diffusion form int A grad phi_i . grad phi_j.
inline std::array<std::array<double, 3>, 3> local_stiffness(const Mesh& mesh, int t,
                                                            const Matrix2& A) {
    const ElementGeometry g = element_geometry(mesh, t);
    std::array<std::array<double, 3>, 3> k{};
    for (int i = 0; i < 3; ++i) {
        const Vec2 agi = A * g.grad[static_cast<std::size_t>(i)];
        for (int j = 0; j < 3; ++j) {
            k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                g.area * dot(agi, g.grad[static_cast<std::size_t>(j)]);
        }
    }
    return k;
}

/// Element mass matrix: T/6 on the diagonal, T/12 elsewhere (T = area).
inline std::array<std::array<double, 3>, 3> local_mass(const Mesh& mesh, int t) {
    const double area = element_geometry(mesh, t).area;
    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (i == j) ? area / 6.0 : area / 12.0;
        }
    }
    return m;
}

/// Assembles diffusion_weight * (A grad, grad) + mass_weight * (., .) over the
/// interior basis functions (Dirichlet rows and columns eliminated).
inline CsrMatrix assemble_operator(const Mesh& mesh, const Matrix2& A,
                                   double diffusion_weight, double mass_weight,
                                   const DirichletMaps& maps) {
    const int unknowns = static_cast<int>(maps.interior_nodes.size());
    std::vector<std::map<int, double>> rows(static_cast<std::size_t>(unknowns));
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const auto k = local_stiffness(mesh, t, A);
        const auto m = local_mass(mesh, t);
        for (int i = 0; i < 3; ++i) {
            const int gi = maps.node_to_interior[static_cast<std::size_t>(tri[i])];
            if (gi < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int gj = maps.node_to_interior[static_cast<std::size_t>(tri[j])];
                if (gj < 0) continue;
                rows[static_cast<std::size_t>(gi)][gj] +=
                    diffusion_weight * k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                    mass_weight * m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        }
    }
    CsrMatrix csr;
    csr.rows = unknowns;
    csr.row_ptr.reserve(static_cast<std::size_t>(unknowns) + 1);
    csr.row_ptr.push_back(0);
    for (const auto& row : rows) {
        for (const auto& [col, val] : row) {
            csr.cols.push_back(col);
            csr.vals.push_back(val);
        }
        csr.row_ptr.push_back(static_cast<int>(csr.cols.size()));
    }
    return csr;
}

/// Load vector int f phi_i over interior basis functions, per-element Gauss
/// quadrature of the given order.
template <class F>
std::vector<double> assemble_load(const Mesh& mesh, F&& f, int quad_order,
                                  const DirichletMaps& maps) {
    std::vector<double> load(maps.interior_nodes.size(), 0.0);
    const auto rule = triangle_rule(quad_order);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const Vec2 p0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
        const Vec2 p1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
        const Vec2 p2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
        const double area = element_geometry(mesh, t).area;
        std::array<double, 3> local{};
        for (const TriQuadPoint& q : rule) {
            const Vec2 x = q.l1 * p0 + q.l2 * p1 + q.l3 * p2;
            const double fv = f(x);
            local[0] += q.w * fv * q.l1;
            local[1] += q.w * fv * q.l2;
            local[2] += q.w * fv * q.l3;
        }
        for (int i = 0; i < 3; ++i) {
            const int gi = maps.node_to_interior[static_cast<std::size_t>(tri[i])];
            if (gi >= 0) load[static_cast<std::size_t>(gi)] += area * local[static_cast<std::size_t>(i)];
        }
    }
    return load;
}

/// Discrete Galerkin system: stiffness + sigma * mass on interior nodes, load
/// from the analytic source term.
struct SparseSystem {
    const Mesh* mesh = nullptr;
    CsrMatrix matrix;
    std::vector<double> load;
    DirichletMaps maps;

    int unknowns() const { return matrix.rows; }
};

inline SparseSystem assemble(const Mesh& mesh, const ProblemSpec& problem,
                             int quad_order = 4) {
    if (!(mesh.domain == problem.domain)) {
        throw std::invalid_argument("assemble: mesh and problem domains differ");
    }
    SparseSystem sys;
    sys.mesh = &mesh;
    sys.maps = interior_maps(mesh);
    sys.matrix = assemble_operator(mesh, problem.A, 1.0, problem.sigma, sys.maps);
    sys.load = assemble_load(mesh, problem.f, quad_order, sys.maps);
    return sys;
}

}  // namespace majorant::fem
