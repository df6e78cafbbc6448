// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "majorant/fields.hpp"
#include "majorant/mesh.hpp"
#include "majorant/problem.hpp"
#include "majorant/quadrature.hpp"

namespace majorant::estimators {

namespace detail {

/// Calls f as f(t, x) when element-aware, else as f(x).
template <class F>
decltype(auto) eval(F&& f, int t, Vec2 x) {
    if constexpr (std::invocable<F&, int, Vec2>) {
        return f(t, x);
    } else {
        return f(x);
    }
}

constexpr double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace detail

/// Squared energy norm int A grad e . grad e + sigma int e^2. The callables
/// may be pointwise (x) or element-aware (t, x).
template <class G, class V>
double energy_norm_sq(const Mesh& mesh, G&& e_grad, V&& e_val,
                      const fem::ProblemSpec& problem, int quad_order = 6) {
    return integrate_elements(mesh, quad_order, [&](int t, Vec2 x) {
        const Vec2 g = detail::eval(e_grad, t, x);
        const double e = detail::eval(e_val, t, x);
        return dot(problem.A * g, g) + problem.sigma * e * e;
    });
}

/// Squared A-inverse norm int A^{-1} w . w of a vector callable.
template <class W>
double flux_norm_sq(const Mesh& mesh, W&& w, const fem::ProblemSpec& problem,
                    int quad_order = 6) {
    const Matrix2 a_inv = problem.A.inverse();
    return integrate_elements(mesh, quad_order, [&](int t, Vec2 x) {
        const Vec2 v = detail::eval(w, t, x);
        return dot(a_inv * v, v);
    });
}

/// Smallest Dirichlet eigenvalue of -Laplace on a rectangle.
inline double analytic_lambda1(const Rect& r) {
    const double pi = std::numbers::pi;
    return pi * pi * (1.0 / (r.width() * r.width()) + 1.0 / (r.height() * r.height()));
}

/// Friedrichs constant of the rectangle, convention |v|^2_L2 <= c_Omega |grad v|^2_L2.
inline double friedrichs_constant(const Rect& r) { return 1.0 / analytic_lambda1(r); }

/// Weights of the robust majorant.
struct ThetaPair {
    double big = 0.0;    ///< Theta
    double small = 0.0;  ///< theta
};

inline ThetaPair theta_pair(double sigma, double sigma_star) {
    if (!(sigma_star > 0.0)) {
        throw std::invalid_argument("theta_pair: sigma_star must be > 0");
    }
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("theta_pair: sigma must be >= 0");
    }
    if (sigma <= sigma_star) {
        const double kappa = sigma / sigma_star;
        return {2.0 / (1.0 + kappa), 1.0 / sigma_star};
    }
    return {1.0, 1.0 / sigma};
}

enum class SigmaStarKind { GlobalFriedrichs, FemScale, Oracle };

inline const char* to_string(SigmaStarKind kind) {
    switch (kind) {
        case SigmaStarKind::GlobalFriedrichs: return "global_friedrichs";
        case SigmaStarKind::FemScale: return "femscale";
        case SigmaStarKind::Oracle: return "oracle";
    }
    return "unknown";
}

struct SigmaStarPolicy {
    SigmaStarKind kind = SigmaStarKind::GlobalFriedrichs;
    double c_dag = 1.0;          ///< FemScale: sigma* = 1 / (c_dag h^2)
    double lambda1_lower = 0.0;  ///< GlobalFriedrichs; <= 0 means analytic lambda1 of the domain
};

/// Exact error norms (not squared) of a run, for the Oracle policy.
struct ExactErrorPair {
    double energy = 0.0;
    double l2 = 0.0;
};

struct SigmaStarContext {
    double h = 0.0;
    const fem::ProblemSpec* problem = nullptr;
    std::optional<ExactErrorPair> exact_error;
};

inline double sigma_star(const SigmaStarPolicy& policy, const SigmaStarContext& ctx) {
    switch (policy.kind) {
        case SigmaStarKind::GlobalFriedrichs: {
            if (!ctx.problem) {
                throw std::invalid_argument("sigma_star: GlobalFriedrichs needs the problem");
            }
            const double lam = policy.lambda1_lower > 0.0
                                   ? policy.lambda1_lower
                                   : analytic_lambda1(ctx.problem->domain);
            return ctx.problem->mu1 * lam;
        }
        case SigmaStarKind::FemScale: {
            if (!(policy.c_dag > 0.0)) {
                throw std::invalid_argument("sigma_star: FemScale needs c_dag > 0");
            }
            if (!(ctx.h > 0.0)) {
                throw std::invalid_argument("sigma_star: FemScale needs h > 0");
            }
            return 1.0 / (policy.c_dag * ctx.h * ctx.h);
        }
        case SigmaStarKind::Oracle: {
            if (!ctx.exact_error) {
                throw std::invalid_argument("sigma_star: Oracle needs the exact error pair");
            }
            if (!ctx.problem) {
                throw std::invalid_argument("sigma_star: Oracle needs the problem");
            }
            const double l2_sq = ctx.exact_error->l2 * ctx.exact_error->l2;
            if (l2_sq == 0.0) {
                throw std::domain_error(
                    "sigma_star: zero L2 error, solution is exact and Oracle is undefined");
            }
            const double a_sq =
                ctx.exact_error->energy * ctx.exact_error->energy - ctx.problem->sigma * l2_sq;
            if (!(a_sq > 0.0)) {
                throw std::domain_error("sigma_star: Oracle A-seminorm is not positive");
            }
            return a_sq / l2_sq;
        }
    }
    throw std::invalid_argument("sigma_star: unknown policy");
}

/// Per-estimator breakdown. Fields that an estimator does not define stay NaN.
struct MajorantReport {
    std::string estimator;
    double flux_term = 0.0;      ///< ]| A grad v + z |[^2_{A^{-1}}
    double residual_term = 0.0;  ///< || f - sigma v - div z ||^2 (line integral: the K-term, squared)
    double theta_big = detail::nan();
    double theta_small = detail::nan();
    double eps = detail::nan();
    double sigma_star = detail::nan();
    double total = 0.0;  ///< bound on the squared (energy or H1) error norm
    std::string notes;
};

/// Shared flux and residual integrals: ]|A grad v + z|[^2_{A^{-1}} and
/// || f - sigma v - div z ||^2, order-6 quadrature by default. The residual
/// uses the analytic f from the problem, never an interpolant.
template <fem::ScalarFieldLike V, fem::VectorFieldLike Z>
std::pair<double, double> flux_and_residual(const Mesh& mesh, const V& v, const Z& z,
                                            const fem::ProblemSpec& problem,
                                            int quad_order = 6) {
    const Matrix2 a_inv = problem.A.inverse();
    const double flux = integrate_elements(mesh, quad_order, [&](int t, Vec2 x) {
        const Vec2 w = problem.A * v.gradient(t, x) + z.value(t, x);
        return dot(a_inv * w, w);
    });
    const double residual = integrate_elements(mesh, quad_order, [&](int t, Vec2 x) {
        const double r = problem.f(x) - problem.sigma * v.value(t, x) - z.divergence(t, x);
        return r * r;
    });
    return {flux, residual};
}

/// Robust majorant: total = Theta [ flux + theta residual ], valid for every
/// sigma >= 0 once sigma_star is admissible.
template <fem::ScalarFieldLike V, fem::VectorFieldLike Z>
MajorantReport majorant_robust(const Mesh& mesh, const V& v, const Z& z,
                               const fem::ProblemSpec& problem, double sigma_star_value,
                               int quad_order = 6) {
    const ThetaPair th = theta_pair(problem.sigma, sigma_star_value);
    const auto [flux, residual] = flux_and_residual(mesh, v, z, problem, quad_order);
    MajorantReport rep;
    rep.estimator = "robust";
    rep.flux_term = flux;
    rep.residual_term = residual;
    rep.theta_big = th.big;
    rep.theta_small = th.small;
    rep.sigma_star = sigma_star_value;
    rep.total = th.big * (flux + th.small * residual);
    return rep;
}

/// Aubin's majorant: flux + residual / sigma. Undefined at sigma = 0.
template <fem::ScalarFieldLike V, fem::VectorFieldLike Z>
MajorantReport majorant_aubin(const Mesh& mesh, const V& v, const Z& z,
                              const fem::ProblemSpec& problem, int quad_order = 6) {
    if (problem.sigma == 0.0) {
        throw std::domain_error("Aubin majorant undefined at sigma = 0");
    }
    const auto [flux, residual] = flux_and_residual(mesh, v, z, problem, quad_order);
    MajorantReport rep;
    rep.estimator = "aubin";
    rep.flux_term = flux;
    rep.residual_term = residual;
    rep.theta_big = 1.0;
    rep.theta_small = 1.0 / problem.sigma;
    // Matches majorant_robust arithmetic exactly on the sigma > sigma* branch.
    rep.total = rep.theta_big * (flux + rep.theta_small * residual);
    return rep;
}

/// Repin-Frolov majorant for A = I, sigma = 0:
/// (1+eps) a^2 + c_Omega (1+1/eps) b^2 with a = |grad v + z|, b = |div z - f|.
/// AUTO eps takes the closed-form minimizer sqrt(c_Omega) b / a.
template <fem::ScalarFieldLike V, fem::VectorFieldLike Z>
MajorantReport majorant_repin_frolov(const Mesh& mesh, const V& v, const Z& z,
                                     const fem::ProblemSpec& problem,
                                     std::optional<double> eps, double c_omega,
                                     int quad_order = 6) {
    if (!problem.A.is_identity() || problem.sigma != 0.0) {
        throw std::domain_error("repin_frolov majorant requires A = I and sigma = 0");
    }
    if (!(c_omega > 0.0)) {
        throw std::invalid_argument("repin_frolov: c_omega must be > 0");
    }
    const auto [flux, residual] = flux_and_residual(mesh, v, z, problem, quad_order);
    MajorantReport rep;
    rep.estimator = "repin_frolov";
    rep.flux_term = flux;
    rep.residual_term = residual;
    if (eps) {
        if (!(*eps > 0.0)) {
            throw std::invalid_argument("repin_frolov: eps must be > 0");
        }
        rep.eps = *eps;
        rep.total = (1.0 + *eps) * flux + c_omega * (1.0 + 1.0 / *eps) * residual;
        return rep;
    }
    if (flux == 0.0) {
        rep.total = c_omega * residual;
        rep.notes = "eps -> inf infimum (not attained)";
        return rep;
    }
    if (residual == 0.0) {
        rep.total = flux;
        rep.notes = "eps -> 0 infimum (not attained)";
        return rep;
    }
    const double a = std::sqrt(flux);
    const double b = std::sqrt(residual);
    const double eps_star = std::sqrt(c_omega) * b / a;
    rep.eps = eps_star;
    rep.total = (1.0 + eps_star) * flux + c_omega * (1.0 + 1.0 / eps_star) * residual;
    return rep;
}

namespace detail {

constexpr double kLogEpsMin = -6.0 * std::numbers::ln10;
constexpr double kLogEpsMax = 6.0 * std::numbers::ln10;

/// Golden-section minimum of a unimodal g over [lo, hi]; returns argmin.
template <class G>
double golden_section(G&& g, double lo, double hi, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double gc = g(c);
    double gd = g(d);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        if (gc < gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - invphi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + invphi * (hi - lo);
            gd = g(d);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Churilova's majorant for any sigma >= 0:
/// (1+eps) flux + residual / (sigma + eps / (c_omega (1+eps))).
/// c_omega must satisfy |w|^2_L2 <= c_omega ]|grad w|[^2_A for w vanishing on
/// the boundary; for A = I that is the classical Friedrichs constant, for
/// general A pass friedrichs_constant(domain) / mu1. AUTO minimizes over eps
/// by golden-section search on log eps in [-6, 6] ln 10 (the objective is
/// convex in eps, hence unimodal).
template <fem::ScalarFieldLike V, fem::VectorFieldLike Z>
MajorantReport majorant_churilova(const Mesh& mesh, const V& v, const Z& z,
                                  const fem::ProblemSpec& problem,
                                  std::optional<double> eps, double c_omega,
                                  int quad_order = 6) {
    if (!(c_omega > 0.0)) {
        throw std::invalid_argument("churilova: c_omega must be > 0");
    }
    const auto [flux, residual] = flux_and_residual(mesh, v, z, problem, quad_order);
    const auto total_at = [&](double e) {
        return (1.0 + e) * flux + residual / (problem.sigma + e / (c_omega * (1.0 + e)));
    };
    MajorantReport rep;
    rep.estimator = "churilova";
    rep.flux_term = flux;
    rep.residual_term = residual;
    if (eps) {
        if (!(*eps > 0.0)) {
            throw std::invalid_argument("churilova: eps must be > 0");
        }
        rep.eps = *eps;
        rep.total = total_at(*eps);
        return rep;
    }
    if (residual == 0.0) {
        rep.total = flux;
        rep.notes = "eps -> 0 infimum (not attained)";
        return rep;
    }
    const double t = detail::golden_section([&](double s) { return total_at(std::exp(s)); },
                                            detail::kLogEpsMin, detail::kLogEpsMax, 1e-13);
    rep.eps = std::exp(t);
    rep.total = total_at(rep.eps);
    if (t < detail::kLogEpsMin + 1e-3 || t > detail::kLogEpsMax - 1e-3) {
        rep.notes = "eps minimizer at search bracket endpoint";
    }
    return rep;
}

/// Line-integral majorant for A = I, sigma = 0 on an axis-aligned rectangle:
/// ( |grad v + z| + sum_k |K_k| )^2 with K_k the cumulative line integral of
/// beta_k (f - div z) along coordinate k from the left/lower edge. Bounds the
/// squared H1 seminorm |grad(v - u)|^2 only.
template <fem::ScalarFieldLike V, fem::VectorFieldLike Z, class B>
MajorantReport majorant_line_integral(const Mesh& mesh, const V& v, const Z& z,
                                      B&& beta1, const fem::ProblemSpec& problem,
                                      int quad_order = 6, int line_points = 4) {
    if (!problem.A.is_identity() || problem.sigma != 0.0) {
        throw std::domain_error("line_integral majorant requires A = I and sigma = 0");
    }
    const auto rule = segment_rule(line_points);
    const Rect& dom = mesh.domain;
    const int n = mesh.n;
    const double hx = mesh.hx;
    const double hy = mesh.hy;

    const auto residual_at = [&](int t, Vec2 x) {
        return problem.f(x) - z.divergence(t, x);
    };

    // || K_1 ||^2: horizontal cumulative integrals, walked row by row. Each
    // Gauss line y = const crosses one diagonal per cell, splitting the cell
    // span into an upper- and a lower-triangle segment.
    const auto seg_int_x = [&](double xa, double xb, int t, double y) {
        return integrate_segment(xa, xb, line_points, [&](double s) {
            const Vec2 p{s, y};
            return detail::eval(beta1, t, p) * residual_at(t, p);
        });
    };
    double k1_sq = 0.0;
    for (int j = 0; j < n; ++j) {
        const double yj = dom.y0 + j * hy;
        for (const SegQuadPoint& qy : rule) {
            const double y = yj + qy.t * hy;
            double cum = 0.0;
            for (int i = 0; i < n; ++i) {
                const double xi = dom.x0 + i * hx;
                const double x_cross = xi + qy.t * hx;
                const int lower = 2 * (j * n + i);
                const int upper = lower + 1;
                for (const SegQuadPoint& qx : rule) {
                    const double xg = xi + qx.t * hx;
                    double k1 = cum;
                    if (xg <= x_cross) {
                        k1 += seg_int_x(xi, xg, upper, y);
                    } else {
                        k1 += seg_int_x(xi, x_cross, upper, y) + seg_int_x(x_cross, xg, lower, y);
                    }
                    k1_sq += qy.w * qx.w * hx * hy * k1 * k1;
                }
                cum += seg_int_x(xi, x_cross, upper, y) + seg_int_x(x_cross, xi + hx, lower, y);
            }
        }
    }

    // || K_2 ||^2: vertical cumulative integrals, walked column by column.
    const auto seg_int_y = [&](double ya, double yb, int t, double x) {
        return integrate_segment(ya, yb, line_points, [&](double s) {
            const Vec2 p{x, s};
            return (1.0 - detail::eval(beta1, t, p)) * residual_at(t, p);
        });
    };
    double k2_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = dom.x0 + i * hx;
        for (const SegQuadPoint& qx : rule) {
            const double x = xi + qx.t * hx;
            double cum = 0.0;
            for (int j = 0; j < n; ++j) {
                const double yj = dom.y0 + j * hy;
                const double y_cross = yj + qx.t * hy;
                const int lower = 2 * (j * n + i);
                const int upper = lower + 1;
                for (const SegQuadPoint& qy : rule) {
                    const double yg = yj + qy.t * hy;
                    double k2 = cum;
                    if (yg <= y_cross) {
                        k2 += seg_int_y(yj, yg, lower, x);
                    } else {
                        k2 += seg_int_y(yj, y_cross, lower, x) + seg_int_y(y_cross, yg, upper, x);
                    }
                    k2_sq += qx.w * qy.w * hx * hy * k2 * k2;
                }
                cum += seg_int_y(yj, y_cross, lower, x) + seg_int_y(y_cross, yj + hy, upper, x);
            }
        }
    }

    const double flux = flux_and_residual(mesh, v, z, problem, quad_order).first;
    const double k_sum = std::sqrt(k1_sq) + std::sqrt(k2_sq);
    MajorantReport rep;
    rep.estimator = "line_integral";
    rep.flux_term = flux;
    rep.residual_term = k_sum * k_sum;
    const double root = std::sqrt(flux) + k_sum;
    rep.total = root * root;
    rep.notes = "bounds the squared H1 seminorm error only";
    return rep;
}

/// One calibration sample: mesh size and exact error norms of a sigma = 0 run.
struct CalibrationRun {
    double h = 0.0;
    double energy_error = 0.0;
    double l2_error = 0.0;
};

/// FemScale constant: safety_factor x max over runs of |e|_0^2 / (h^2 |e|_A^2).
inline double calibrate_c_dag(const std::vector<CalibrationRun>& runs,
                              double safety_factor = 2.0) {
    if (runs.empty()) {
        throw std::invalid_argument("calibrate_c_dag: no calibration runs");
    }
    double worst = 0.0;
    for (const CalibrationRun& r : runs) {
        if (!(r.h > 0.0) || !(r.energy_error > 0.0) || !(r.l2_error > 0.0)) {
            throw std::invalid_argument("calibrate_c_dag: runs need positive h and errors");
        }
        const double ratio =
            (r.l2_error * r.l2_error) / (r.h * r.h * r.energy_error * r.energy_error);
        if (ratio > worst) worst = ratio;
    }
    return safety_factor * worst;
}

}  // namespace majorant::estimators
