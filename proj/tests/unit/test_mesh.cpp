// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <catch2/catch_amalgamated.hpp>

#include "majorant/geometry.hpp"
#include "majorant/mesh.hpp"
#include "majorant/quadrature.hpp"

using namespace majorant;

namespace {

// A one-triangle mesh that bypasses build_uniform_mesh, for local geometry checks.
Mesh single_triangle(Vec2 a, Vec2 b, Vec2 c) {
    Mesh m;
    m.domain = Rect{0.0, 0.0, 1.0, 1.0};
    m.n = 1;
    m.nodes = {a, b, c};
    m.triangles = {{0, 1, 2}};
    m.boundary_mask = {1, 1, 1};
    m.hx = m.hy = 1.0;
    m.h = std::sqrt(2.0);
    return m;
}

}  // namespace

TEST_CASE("vector and matrix primitives") {
    const Vec2 a{3.0, 4.0};
    const Vec2 b{-1.0, 2.0};
    CHECK(dot(a, b) == 5.0);
    CHECK(cross(a, b) == 10.0);
    CHECK(norm(a) == 5.0);
    CHECK((a + b).x == 2.0);
    CHECK((a - b).y == 2.0);
    CHECK((2.0 * a).x == 6.0);

    const Matrix2 m{2.0, 0.5, 0.5, 1.0};
    CHECK(m.det() == Catch::Approx(1.75).epsilon(1e-15));
    const Matrix2 inv = m.inverse();
    const Vec2 id = inv * (m * a);
    CHECK(id.x == Catch::Approx(a.x).epsilon(1e-14));
    CHECK(id.y == Catch::Approx(a.y).epsilon(1e-14));
    CHECK(m.symmetry_gap() == 0.0);
    CHECK_FALSE(m.is_identity());
    CHECK(Matrix2::identity().is_identity());

    const EigenPair ev = symmetric_eigenvalues(m);
    CHECK(ev.min == Catch::Approx((3.0 - std::sqrt(2.0)) / 2.0).epsilon(1e-14));
    CHECK(ev.max == Catch::Approx((3.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-14));
}

TEST_CASE("uniform mesh counts and spacing") {
    const Mesh m1 = build_uniform_mesh(1, Rect::unit_square());
    CHECK(m1.node_count() == 4);
    CHECK(m1.triangle_count() == 2);
    CHECK(m1.h == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));

    const Mesh m4 = build_uniform_mesh(4, Rect::unit_square());
    CHECK(m4.node_count() == 25);
    CHECK(m4.triangle_count() == 32);

    const Mesh rect = build_uniform_mesh(2, Rect{0.0, 0.0, 2.0, 1.0});
    CHECK(rect.node_count() == 9);
    CHECK(rect.triangle_count() == 8);
    CHECK(rect.hx == 1.0);
    CHECK(rect.hy == 0.5);
    CHECK(rect.h == Catch::Approx(std::sqrt(1.25)).epsilon(1e-15));

    CHECK_THROWS_AS(build_uniform_mesh(0, Rect::unit_square()), std::invalid_argument);
    CHECK_THROWS_AS(build_uniform_mesh(2, Rect{0.0, 0.0, -1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("refinement halves h exactly") {
    const Rect dom{0.0, 0.0, 1.0, 1.0};
    CHECK(build_uniform_mesh(16, dom).h == build_uniform_mesh(8, dom).h / 2.0);
    const Rect wide{0.0, 0.0, 3.0, 1.0};
    CHECK(build_uniform_mesh(20, wide).h == Catch::Approx(build_uniform_mesh(10, wide).h / 2.0).epsilon(1e-15));
}

TEST_CASE("mesh invariants: orientation, area sum, boundary, node sharing") {
    const Rect dom{-1.0, 0.5, 2.0, 3.5};
    const Mesh m = build_uniform_mesh(5, dom);

    double total_area = 0.0;
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
        const ElementGeometry g = element_geometry(m, t);
        CHECK(g.area > 0.0);
        total_area += g.area;
        Vec2 grad_sum{0.0, 0.0};
        for (const Vec2& grad : g.grad) grad_sum = grad_sum + grad;
        CHECK(norm(grad_sum) < 1e-13);
    }
    CHECK(total_area == Catch::Approx(dom.area()).epsilon(1e-12));

    // Boundary mask matches the lattice edge exactly.
    for (int iy = 0; iy <= m.n; ++iy) {
        for (int ix = 0; ix <= m.n; ++ix) {
            const bool edge = ix == 0 || iy == 0 || ix == m.n || iy == m.n;
            CHECK(static_cast<bool>(m.boundary_mask[m.node_index(ix, iy)]) == edge);
        }
    }

    // Every interior lattice node is shared by exactly six triangles.
    std::vector<int> incident(m.node_count(), 0);
    for (const auto& tri : m.triangles)
        for (int v : tri) ++incident[v];
    for (int iy = 1; iy < m.n; ++iy)
        for (int ix = 1; ix < m.n; ++ix) CHECK(incident[m.node_index(ix, iy)] == 6);

    // Exact domain corners appear among the nodes.
    CHECK(m.nodes.front().x == dom.x0);
    CHECK(m.nodes.front().y == dom.y0);
    CHECK(m.nodes.back().x == dom.x1);
    CHECK(m.nodes.back().y == dom.y1);
}

TEST_CASE("element geometry on the reference triangle") {
    const Mesh ref = single_triangle({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
    const ElementGeometry g = element_geometry(ref, 0);
    CHECK(g.area == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(g.grad[0].x == Catch::Approx(-1.0));
    CHECK(g.grad[0].y == Catch::Approx(-1.0));
    CHECK(g.grad[1].x == Catch::Approx(1.0));
    CHECK(g.grad[1].y == Catch::Approx(0.0));
    CHECK(g.grad[2].x == Catch::Approx(0.0));
    CHECK(g.grad[2].y == Catch::Approx(1.0));

    // Gradients are translation invariant.
    const Mesh shifted = single_triangle({2.0, -1.0}, {3.0, -1.0}, {2.0, 0.0});
    const ElementGeometry gs = element_geometry(shifted, 0);
    for (int i = 0; i < 3; ++i) {
        CHECK(gs.grad[i].x == Catch::Approx(g.grad[i].x).margin(1e-15));
        CHECK(gs.grad[i].y == Catch::Approx(g.grad[i].y).margin(1e-15));
    }

    CHECK_THROWS_AS(element_geometry(ref, 1), std::out_of_range);
}

TEST_CASE("barycentric coordinates sum to one at quadrature points") {
    const Mesh m = build_uniform_mesh(3, Rect{0.0, 0.0, 2.0, 1.0});
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
        const auto& tri = m.triangles[t];
        for (const TriQuadPoint& q : triangle_rule(4)) {
            const Vec2 p = q.l1 * m.nodes[tri[0]] + q.l2 * m.nodes[tri[1]] + q.l3 * m.nodes[tri[2]];
            const auto lambda = barycentric(m, t, p);
            CHECK(lambda[0] + lambda[1] + lambda[2] == Catch::Approx(1.0).epsilon(1e-13));
            CHECK(lambda[0] == Catch::Approx(q.l1).margin(1e-12));
        }
    }
}

TEST_CASE("locate returns the containing triangle") {
    const Mesh m = build_uniform_mesh(7, Rect{0.25, -0.5, 1.75, 2.5});
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> ux(m.domain.x0, m.domain.x1);
    std::uniform_real_distribution<double> uy(m.domain.y0, m.domain.y1);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 p{ux(rng), uy(rng)};
        const int t = m.locate(p);
        REQUIRE(t >= 0);
        REQUIRE(t < static_cast<int>(m.triangle_count()));
        const auto lambda = barycentric(m, t, p);
        for (double l : lambda) CHECK(l >= -1e-12);
    }

    // Points on the shared diagonal and on cell edges resolve to a valid triangle.
    const Mesh unit = build_uniform_mesh(4, Rect::unit_square());
    for (const Vec2 p : {Vec2{0.125, 0.125}, Vec2{0.25, 0.5}, Vec2{0.5, 0.25},
                         Vec2{0.0, 0.0}, Vec2{1.0, 1.0}, Vec2{1.0, 0.3}}) {
        const int t = unit.locate(p);
        REQUIRE(t >= 0);
        REQUIRE(t < static_cast<int>(unit.triangle_count()));
        const auto lambda = barycentric(unit, t, p);
        for (double l : lambda) CHECK(l >= -1e-12);
    }
}

TEST_CASE("structured indexing matches the documented layout") {
    const Mesh m = build_uniform_mesh(3, Rect::unit_square());
    CHECK(m.node_index(0, 0) == 0);
    CHECK(m.node_index(3, 0) == 3);
    CHECK(m.node_index(0, 1) == 4);
    CHECK(m.node_index(3, 3) == 15);

    // Cell (0, 0): lower triangle is {v00, v10, v11}, upper is {v00, v11, v01}.
    CHECK(m.triangles[0][0] == 0);
    CHECK(m.triangles[0][1] == 1);
    CHECK(m.triangles[0][2] == 5);
    CHECK(m.triangles[1][0] == 0);
    CHECK(m.triangles[1][1] == 5);
    CHECK(m.triangles[1][2] == 4);
}

TEST_CASE("mesh text dump round-trips the layout") {
    const Mesh m = build_uniform_mesh(1, Rect::unit_square());
    std::ostringstream os;
    write_mesh_text(m, os);
    CHECK(os.str() ==
          "nodes 4 triangles 2 h 1.4142135623730951\n"
          "0 0\n"
          "1 0\n"
          "0 1\n"
          "1 1\n"
          "0 1 3\n"
          "0 3 2\n");
}
