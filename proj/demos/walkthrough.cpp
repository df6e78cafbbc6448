// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end tour: solve a manufactured diffusion-reaction problem, recover a
// flux, and compare the guaranteed majorants against the exact error.

#include <cstdio>

#include "majorant/majorant.hpp"

int main() {
    using namespace majorant;

    const double sigma = 100.0;
    const verification::ManufacturedCase mc = verification::manufactured("sinsin", sigma);
    const Mesh mesh = build_uniform_mesh(32, mc.problem.domain);
    std::printf("mesh: %zu nodes, %zu triangles, h = %.6f\n",
                mesh.node_count(), mesh.triangle_count(), mesh.h);

    fem::SolveStats stats;
    const fem::SparseSystem system = fem::assemble(mesh, mc.problem);
    const fem::FeScalarField u = fem::solve(system, {}, &stats);
    std::printf("solve: %d CG iterations, relative residual %.3e\n",
                stats.iterations, stats.relative_residual);

    const fem::FeVectorField z = recovery::recover_flux(u, mc.problem);
    const verification::ErrorPair err = verification::true_error(mc, u);
    std::printf("exact error: energy %.6e, L2 %.6e\n", err.energy, err.l2);

    const double sigma_star = mc.problem.mu1 * estimators::analytic_lambda1(mc.problem.domain);
    const estimators::MajorantReport robust =
        estimators::majorant_robust(mesh, u, z, mc.problem, sigma_star);
    const estimators::MajorantReport aubin = estimators::majorant_aubin(mesh, u, z, mc.problem);

    std::printf("robust majorant: total %.6e, effectivity %.3f (Theta %.3f, theta %.3e)\n",
                robust.total, verification::effectivity(robust, err.energy),
                robust.theta_big, robust.theta_small);
    std::printf("aubin majorant:  total %.6e, effectivity %.3f\n",
                aubin.total, verification::effectivity(aubin, err.energy));

    const estimators::MajorantReport churilova = estimators::majorant_churilova(
        mesh, u, z, mc.problem, std::nullopt,
        estimators::friedrichs_constant(mc.problem.domain) / mc.problem.mu1);
    std::printf("churilova majorant: total %.6e at eps = %.6e, effectivity %.3f\n",
                churilova.total, churilova.eps, verification::effectivity(churilova, err.energy));

    const bool guaranteed = robust.total >= err.energy * err.energy;
    std::printf("guaranteed bound holds: %s\n", guaranteed ? "yes" : "NO");
    return guaranteed ? 0 : 1;
}
