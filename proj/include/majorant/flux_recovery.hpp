// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "majorant/fields.hpp"
#include "majorant/mesh.hpp"
#include "majorant/problem.hpp"

namespace majorant::recovery {

enum class Weighting { Uniform, AreaWeighted };

struct RecoveryConfig {
    Weighting weighting = Weighting::AreaWeighted;
};

/// Nodal averaging of the discontinuous finite-element flux -A grad u into a
/// continuous piecewise-linear field, hence a member of H(div). Boundary
/// nodes average one-sided over their incident triangles.
inline fem::FeVectorField recover_flux(const fem::FeScalarField& u,
                                       const fem::ProblemSpec& problem,
                                       const RecoveryConfig& cfg = {}) {
    const Mesh& mesh = u.mesh();
    std::vector<double> zx(mesh.nodes.size(), 0.0);
    std::vector<double> zy(mesh.nodes.size(), 0.0);
    std::vector<double> weight(mesh.nodes.size(), 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Vec2 flux = -1.0 * (problem.A * u.gradient(t));
        const double w = cfg.weighting == Weighting::AreaWeighted
                             ? element_geometry(mesh, t).area
                             : 1.0;
        for (int node : mesh.triangles[static_cast<std::size_t>(t)]) {
            const auto i = static_cast<std::size_t>(node);
            zx[i] += w * flux.x;
            zy[i] += w * flux.y;
            weight[i] += w;
        }
    }
    for (std::size_t i = 0; i < weight.size(); ++i) {
        zx[i] /= weight[i];
        zy[i] /= weight[i];
    }
    return fem::FeVectorField(mesh, std::move(zx), std::move(zy));
}

/// Piecewise-constant divergence data, one value per triangle.
inline std::vector<double> divergence(const fem::FeVectorField& z) {
    const Mesh& mesh = z.mesh();
    std::vector<double> d(static_cast<std::size_t>(mesh.triangle_count()));
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        d[static_cast<std::size_t>(t)] = z.divergence(t);
    }
    return d;
}

}  // namespace majorant::recovery
