// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "majorant/geometry.hpp"

namespace majorant::fem {

/// Diffusion-reaction problem -div(A grad u) + sigma u = f on a rectangle,
/// u = 0 on the whole boundary.  A is constant SPD, sigma a nonnegative
/// constant, f analytic (callable anywhere in the domain).
struct ProblemSpec {
    Matrix2 A;
    double sigma;
    std::function<double(Vec2)> f;
    Rect domain;
    double mu1, mu2;  // eigenvalues of A, mu1 <= mu2

    ProblemSpec(Matrix2 a, double sigma_, std::function<double(Vec2)> f_,
                Rect domain_ = Rect::unit_square())
        : A(a), sigma(sigma_), f(std::move(f_)), domain(domain_) {
        if (A.symmetry_gap() > 1e-14) {
            throw std::invalid_argument("ProblemSpec: A must be symmetric");
        }
        const EigenPair ev = symmetric_eigenvalues(A);
        mu1 = ev.min;
        mu2 = ev.max;
        if (!(mu1 > 0.0)) {
            throw std::invalid_argument("ProblemSpec: A must be positive definite");
        }
        if (!(sigma >= 0.0)) {
            throw std::invalid_argument("ProblemSpec: sigma must be >= 0");
        }
        if (!f) {
            throw std::invalid_argument("ProblemSpec: source term f is required");
        }
    }
};

}  // namespace majorant::fem
