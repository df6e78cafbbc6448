// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "majorant/geometry.hpp"
#include "majorant/mesh.hpp"

namespace majorant::fem {

/// Continuous piecewise-linear scalar function given by one coefficient per
/// node.  Solution fields carry exact zeros on Dirichlet (boundary) nodes;
/// the type itself admits arbitrary nodal data so that interpolants of
/// non-vanishing functions can be represented too.
class FeScalarField {
public:
    explicit FeScalarField(const Mesh& mesh)
        : mesh_(&mesh), coeff_(mesh.nodes.size(), 0.0) {}

    FeScalarField(const Mesh& mesh, std::vector<double> coefficients)
        : mesh_(&mesh), coeff_(std::move(coefficients)) {
        if (coeff_.size() != mesh.nodes.size()) {
            throw std::invalid_argument("FeScalarField: coefficient count != node count");
        }
    }

    const Mesh& mesh() const { return *mesh_; }
    const std::vector<double>& coefficients() const { return coeff_; }
    std::vector<double>& coefficients() { return coeff_; }

    /// Value on triangle t at point x (x assumed inside t).
    double value(int t, Vec2 x) const {
        const auto& tri = mesh_->triangles[static_cast<std::size_t>(t)];
        const auto l = barycentric(*mesh_, t, x);
        return l[0] * coeff_[static_cast<std::size_t>(tri[0])] +
               l[1] * coeff_[static_cast<std::size_t>(tri[1])] +
               l[2] * coeff_[static_cast<std::size_t>(tri[2])];
    }

    /// Gradient on triangle t; constant there, so the point is irrelevant.
    Vec2 gradient(int t, Vec2 = {}) const {
        const auto& tri = mesh_->triangles[static_cast<std::size_t>(t)];
        const ElementGeometry g = element_geometry(*mesh_, t);
        Vec2 grad{0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            grad = grad + coeff_[static_cast<std::size_t>(tri[k])] * g.grad[static_cast<std::size_t>(k)];
        }
        return grad;
    }

    double operator()(Vec2 x) const { return value(mesh_->locate(x), x); }

private:
    const Mesh* mesh_;
    std::vector<double> coeff_;
};

/// Continuous piecewise-linear 2-component vector function (nodal values per
/// component).  Continuity puts it in H(div): the divergence is piecewise
/// constant and square integrable.
class FeVectorField {
public:
    explicit FeVectorField(const Mesh& mesh)
        : mesh_(&mesh),
          x_(mesh.nodes.size(), 0.0),
          y_(mesh.nodes.size(), 0.0) {}

    FeVectorField(const Mesh& mesh, std::vector<double> x, std::vector<double> y)
        : mesh_(&mesh), x_(std::move(x)), y_(std::move(y)) {
        if (x_.size() != mesh.nodes.size() || y_.size() != mesh.nodes.size()) {
            throw std::invalid_argument("FeVectorField: component length != node count");
        }
    }

    const Mesh& mesh() const { return *mesh_; }
    const std::vector<double>& x_coefficients() const { return x_; }
    const std::vector<double>& y_coefficients() const { return y_; }
    std::vector<double>& x_coefficients() { return x_; }
    std::vector<double>& y_coefficients() { return y_; }

    Vec2 value(int t, Vec2 x) const {
        const auto& tri = mesh_->triangles[static_cast<std::size_t>(t)];
        const auto l = barycentric(*mesh_, t, x);
        Vec2 v{0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            const auto i = static_cast<std::size_t>(tri[k]);
            v = v + l[static_cast<std::size_t>(k)] * Vec2{x_[i], y_[i]};
        }
        return v;
    }

    /// Exact divergence on triangle t; constant there.
    double divergence(int t, Vec2 = {}) const {
        const auto& tri = mesh_->triangles[static_cast<std::size_t>(t)];
        const ElementGeometry g = element_geometry(*mesh_, t);
        double div = 0.0;
        for (int k = 0; k < 3; ++k) {
            const auto i = static_cast<std::size_t>(tri[k]);
            const Vec2 gk = g.grad[static_cast<std::size_t>(k)];
            div += x_[i] * gk.x + y_[i] * gk.y;
        }
        return div;
    }

    Vec2 operator()(Vec2 x) const { return value(mesh_->locate(x), x); }

private:
    const Mesh* mesh_;
    std::vector<double> x_, y_;
};

/// Anything evaluable as a scalar potential with an element-aware value and
/// gradient: FE fields and analytic adaptors alike.
template <class F>
concept ScalarFieldLike = requires(const F& f, int t, Vec2 x) {
    { f.value(t, x) } -> std::convertible_to<double>;
    { f.gradient(t, x) } -> std::convertible_to<Vec2>;
};

/// Vector counterpart for test fluxes: value plus square-integrable divergence.
template <class F>
concept VectorFieldLike = requires(const F& f, int t, Vec2 x) {
    { f.value(t, x) } -> std::convertible_to<Vec2>;
    { f.divergence(t, x) } -> std::convertible_to<double>;
};

/// Wraps analytic callables u(x), grad u(x) in the ScalarFieldLike shape.
template <class Value, class Gradient>
class AnalyticPotential {
public:
    AnalyticPotential(Value v, Gradient g) : v_(std::move(v)), g_(std::move(g)) {}
    double value(int, Vec2 x) const { return v_(x); }
    Vec2 gradient(int, Vec2 x) const { return g_(x); }

private:
    Value v_;
    Gradient g_;
};

/// Wraps analytic callables z(x), div z(x) in the VectorFieldLike shape.
template <class Value, class Divergence>
class AnalyticFlux {
public:
    AnalyticFlux(Value v, Divergence d) : v_(std::move(v)), d_(std::move(d)) {}
    Vec2 value(int, Vec2 x) const { return v_(x); }
    double divergence(int, Vec2 x) const { return d_(x); }

private:
    Value v_;
    Divergence d_;
};

static_assert(ScalarFieldLike<FeScalarField>);
static_assert(VectorFieldLike<FeVectorField>);

/// Nodal interpolant of an analytic scalar function.
template <class F>
FeScalarField interpolate(const Mesh& mesh, F&& f) {
    std::vector<double> c(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) c[i] = f(mesh.nodes[i]);
    return FeScalarField(mesh, std::move(c));
}

/// Nodal interpolant of an analytic vector function.
template <class F>
FeVectorField interpolate_vector(const Mesh& mesh, F&& f) {
    std::vector<double> x(mesh.nodes.size()), y(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const Vec2 v = f(mesh.nodes[i]);
        x[i] = v.x;
        y[i] = v.y;
    }
    return FeVectorField(mesh, std::move(x), std::move(y));
}

/// Piecewise-constant gradient data of a P1 field, one 2-vector per triangle.
inline std::vector<Vec2> gradient(const FeScalarField& field) {
    const Mesh& mesh = field.mesh();
    std::vector<Vec2> g(static_cast<std::size_t>(mesh.triangle_count()));
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        g[static_cast<std::size_t>(t)] = field.gradient(t);
    }
    return g;
}

}  // namespace majorant::fem
