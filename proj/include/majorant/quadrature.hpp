// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "majorant/mesh.hpp"

namespace majorant {

/// Quadrature node in barycentric coordinates; weights of a rule sum to 1
/// (multiply by the triangle area).
struct TriQuadPoint {
    double l1, l2, l3, w;
};

namespace quad_tables {

// Symmetric Gauss rules on the triangle (Dunavant), degrees 1..7.
inline constexpr TriQuadPoint deg1[] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0},
};

inline constexpr TriQuadPoint deg2[] = {
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
};

inline constexpr TriQuadPoint deg3[] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, -27.0 / 48.0},
    {0.6, 0.2, 0.2, 25.0 / 48.0},
    {0.2, 0.6, 0.2, 25.0 / 48.0},
    {0.2, 0.2, 0.6, 25.0 / 48.0},
};

inline constexpr TriQuadPoint deg4[] = {
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
};

inline constexpr TriQuadPoint deg5[] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
    {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
};

inline constexpr TriQuadPoint deg6[] = {
    {0.501426509658179, 0.249286745170910, 0.249286745170911, 0.116786275726379},
    {0.249286745170910, 0.501426509658179, 0.249286745170911, 0.116786275726379},
    {0.249286745170910, 0.249286745170911, 0.501426509658179, 0.116786275726379},
    {0.873821971016996, 0.063089014491502, 0.063089014491502, 0.050844906370207},
    {0.063089014491502, 0.873821971016996, 0.063089014491502, 0.050844906370207},
    {0.063089014491502, 0.063089014491502, 0.873821971016996, 0.050844906370207},
    {0.053145049844816, 0.310352451033785, 0.636502499121399, 0.082851075618374},
    {0.053145049844816, 0.636502499121399, 0.310352451033785, 0.082851075618374},
    {0.310352451033785, 0.053145049844816, 0.636502499121399, 0.082851075618374},
    {0.310352451033785, 0.636502499121399, 0.053145049844816, 0.082851075618374},
    {0.636502499121399, 0.053145049844816, 0.310352451033785, 0.082851075618374},
    {0.636502499121399, 0.310352451033785, 0.053145049844816, 0.082851075618374},
};

inline constexpr TriQuadPoint deg7[] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, -0.149570044467670},
    {0.479308067841923, 0.260345966079038, 0.260345966079039, 0.175615257433204},
    {0.260345966079038, 0.479308067841923, 0.260345966079039, 0.175615257433204},
    {0.260345966079038, 0.260345966079039, 0.479308067841923, 0.175615257433204},
    {0.869739794195568, 0.065130102902216, 0.065130102902216, 0.053347235608839},
    {0.065130102902216, 0.869739794195568, 0.065130102902216, 0.053347235608839},
    {0.065130102902216, 0.065130102902216, 0.869739794195568, 0.053347235608839},
    {0.048690315425316, 0.312865496004875, 0.638444188569809, 0.077113760890257},
    {0.048690315425316, 0.638444188569809, 0.312865496004875, 0.077113760890257},
    {0.312865496004875, 0.048690315425316, 0.638444188569809, 0.077113760890257},
    {0.312865496004875, 0.638444188569809, 0.048690315425316, 0.077113760890257},
    {0.638444188569809, 0.048690315425316, 0.312865496004875, 0.077113760890257},
    {0.638444188569809, 0.312865496004875, 0.048690315425316, 0.077113760890257},
};

}  // namespace quad_tables

/// Rule of the requested polynomial exactness degree, 1..7.
inline std::span<const TriQuadPoint> triangle_rule(int order) {
    using namespace quad_tables;
    switch (order) {
        case 1: return deg1;
        case 2: return deg2;
        case 3: return deg3;
        case 4: return deg4;
        case 5: return deg5;
        case 6: return deg6;
        case 7: return deg7;
        default:
            throw std::invalid_argument("triangle_rule: unsupported order " +
                                        std::to_string(order));
    }
}

/// Integrates f(t, x) where t is the triangle index of the quadrature point x.
template <class F>
double integrate_elements(const Mesh& mesh, int quad_order, F&& f) {
    const auto rule = triangle_rule(quad_order);
    double sum = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const Vec2 p0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
        const Vec2 p1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
        const Vec2 p2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
        const double area = 0.5 * cross(p1 - p0, p2 - p0);
        double local = 0.0;
        for (const TriQuadPoint& q : rule) {
            const Vec2 x = q.l1 * p0 + q.l2 * p1 + q.l3 * p2;
            local += q.w * f(t, x);
        }
        sum += area * local;
    }
    return sum;
}

/// Per-triangle Gauss quadrature of a pointwise integrand over the mesh.
template <class F>
double integrate(const F& integrand, const Mesh& mesh, int quad_order) {
    return integrate_elements(mesh, quad_order, [&](int, Vec2 x) { return integrand(x); });
}

/// Gauss-Legendre node on [0, 1]; weights of a rule sum to 1.
struct SegQuadPoint {
    double t, w;
};

namespace quad_tables {

inline constexpr SegQuadPoint seg1[] = {
    {0.5, 1.0},
};
inline constexpr SegQuadPoint seg2[] = {
    {0.21132486540518713, 0.5},
    {0.7886751345948129, 0.5},
};
inline constexpr SegQuadPoint seg3[] = {
    {0.1127016653792583, 5.0 / 18.0},
    {0.5, 4.0 / 9.0},
    {0.8872983346207417, 5.0 / 18.0},
};
inline constexpr SegQuadPoint seg4[] = {
    {0.06943184420297371, 0.17392742256872692},
    {0.33000947820757187, 0.3260725774312731},
    {0.6699905217924281, 0.3260725774312731},
    {0.9305681557970262, 0.17392742256872692},
};
inline constexpr SegQuadPoint seg5[] = {
    {0.04691007703066800, 0.11846344252809454},
    {0.23076534494715845, 0.23931433524968324},
    {0.5, 0.28444444444444444},
    {0.7692346550528415, 0.23931433524968324},
    {0.9530899229693320, 0.11846344252809454},
};

}  // namespace quad_tables

/// Gauss-Legendre rule with the given point count, 1..5.
inline std::span<const SegQuadPoint> segment_rule(int points) {
    using namespace quad_tables;
    switch (points) {
        case 1: return seg1;
        case 2: return seg2;
        case 3: return seg3;
        case 4: return seg4;
        case 5: return seg5;
        default:
            throw std::invalid_argument("segment_rule: unsupported point count " +
                                        std::to_string(points));
    }
}

/// Gauss quadrature of g over the interval [a, b].
template <class G>
double integrate_segment(double a, double b, int points, G&& g) {
    double sum = 0.0;
    for (const SegQuadPoint& q : segment_rule(points)) {
        sum += q.w * g(a + q.t * (b - a));
    }
    return (b - a) * sum;
}

}  // namespace majorant
