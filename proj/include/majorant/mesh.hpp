// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "majorant/geometry.hpp"

namespace majorant {

/// Structured triangulation of an axis-aligned rectangle: an n x n grid of
/// cells, each split into two triangles by the lower-left to upper-right
/// diagonal. Nodes are ordered y-major (index = iy * (n + 1) + ix), triangles
/// are counterclockwise. Immutable after construction; safe for concurrent
/// reads.
struct Mesh {
    Rect domain;
    int n = 0;  ///< subdivisions per side
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::uint8_t> boundary_mask;  ///< 1 iff the node lies on the rectangle border
    double h = 0.0;                           ///< maximum element diameter (cell diagonal)
    double hx = 0.0, hy = 0.0;                ///< cell extents

    int node_count() const { return static_cast<int>(nodes.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }

    int node_index(int ix, int iy) const { return iy * (n + 1) + ix; }

    /// Index of a triangle containing p (points on shared edges resolve to
    /// one of the adjacent triangles; fields are continuous there).
    int locate(Vec2 p) const {
        auto clamp_cell = [this](double t) {
            int i = static_cast<int>(t);
            if (i < 0) i = 0;
            if (i > n - 1) i = n - 1;
            return i;
        };
        const int ix = clamp_cell((p.x - domain.x0) / hx);
        const int iy = clamp_cell((p.y - domain.y0) / hy);
        const double lx = (p.x - domain.x0) / hx - ix;
        const double ly = (p.y - domain.y0) / hy - iy;
        // Lower triangle covers ly <= lx, upper the rest.
        return 2 * (iy * n + ix) + (ly > lx ? 1 : 0);
    }
};

/// Area and the constant gradients of the three P1 hat functions on a triangle.
struct ElementGeometry {
    double area = 0.0;
    std::array<Vec2, 3> grad{};
};

inline ElementGeometry element_geometry(const Mesh& mesh, int t) {
    if (t < 0 || t >= mesh.triangle_count()) {
        throw std::out_of_range("element_geometry: triangle index " + std::to_string(t) +
                                " out of range");
    }
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const Vec2 p0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
    const Vec2 p1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
    const Vec2 p2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
    const double twice_area = cross(p1 - p0, p2 - p0);
    ElementGeometry g;
    g.area = 0.5 * twice_area;
    g.grad[0] = {(p1.y - p2.y) / twice_area, (p2.x - p1.x) / twice_area};
    g.grad[1] = {(p2.y - p0.y) / twice_area, (p0.x - p2.x) / twice_area};
    g.grad[2] = {(p0.y - p1.y) / twice_area, (p1.x - p0.x) / twice_area};
    return g;
}

/// Barycentric coordinates of x in triangle t.
inline std::array<double, 3> barycentric(const Mesh& mesh, int t, Vec2 x) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const Vec2 p0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
    const Vec2 p1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
    const Vec2 p2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
    const double twice_area = cross(p1 - p0, p2 - p0);
    const double l0 = cross(p1 - x, p2 - x) / twice_area;
    const double l1 = cross(p2 - x, p0 - x) / twice_area;
    return {l0, l1, 1.0 - l0 - l1};
}

/// Uniform n x n triangulation of the rectangle. h equals the cell diagonal.
inline Mesh build_uniform_mesh(int n, const Rect& domain) {
    if (n < 1) {
        throw std::invalid_argument("build_uniform_mesh: n must be >= 1");
    }
    if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
        throw std::invalid_argument("build_uniform_mesh: degenerate rectangle");
    }
    Mesh mesh;
    mesh.domain = domain;
    mesh.n = n;
    mesh.hx = domain.width() / n;
    mesh.hy = domain.height() / n;
    mesh.h = std::hypot(mesh.hx, mesh.hy);

    const int m = n + 1;
    mesh.nodes.reserve(static_cast<std::size_t>(m) * m);
    mesh.boundary_mask.reserve(static_cast<std::size_t>(m) * m);
    for (int iy = 0; iy <= n; ++iy) {
        const double y = (iy == n) ? domain.y1 : domain.y0 + iy * mesh.hy;
        for (int ix = 0; ix <= n; ++ix) {
            const double x = (ix == n) ? domain.x1 : domain.x0 + ix * mesh.hx;
            mesh.nodes.push_back({x, y});
            const bool on_border = ix == 0 || ix == n || iy == 0 || iy == n;
            mesh.boundary_mask.push_back(on_border ? 1 : 0);
        }
    }

    mesh.triangles.reserve(2u * static_cast<std::size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const int v00 = mesh.node_index(ix, iy);
            const int v10 = v00 + 1;
            const int v01 = v00 + m;
            const int v11 = v01 + 1;
            mesh.triangles.push_back({v00, v10, v11});  // lower (below the diagonal)
            mesh.triangles.push_back({v00, v11, v01});  // upper
        }
    }
    return mesh;
}

namespace detail {
inline std::string shortest(double v) {
    std::array<char, 32> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), static_cast<std::size_t>(p - buf.data()));
}
}  // namespace detail

/// Plain-text dump: header `nodes <N> triangles <T> h <value>`, node
/// coordinate lines, then 0-based triangle index lines.
inline void write_mesh_text(const Mesh& mesh, std::ostream& out) {
    out << "nodes " << mesh.node_count() << " triangles " << mesh.triangle_count() << " h "
        << detail::shortest(mesh.h) << "\n";
    for (const Vec2& p : mesh.nodes) {
        out << detail::shortest(p.x) << " " << detail::shortest(p.y) << "\n";
    }
    for (const auto& t : mesh.triangles) {
        out << t[0] << " " << t[1] << " " << t[2] << "\n";
    }
}

}  // namespace majorant
