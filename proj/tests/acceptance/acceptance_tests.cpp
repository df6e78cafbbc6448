// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks at desk scale (unit square, n <= 64). Every test prints
// exactly one "[criterion N] PASS/FAIL: ..." line with the measured numbers
// before asserting, so a failed run still documents what was observed.

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "majorant/majorant.hpp"

using namespace majorant;
using estimators::ExactErrorPair;
using estimators::SigmaStarContext;
using estimators::SigmaStarKind;
using estimators::SigmaStarPolicy;
using experiment::parse_config;
using experiment::run_sweep;
using experiment::SweepResult;
using experiment::SweepRow;
using fem::AnalyticFlux;
using fem::AnalyticPotential;
using fem::ProblemSpec;

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[criterion %d] %s: %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

// A solved manufactured run with recovered flux. Heap-held and cached so the
// criteria share solves; the fields reference the mesh member, so a Run is
// never moved after construction.
struct Run {
    verification::ManufacturedCase mc;
    Mesh mesh;
    fem::FeScalarField u;
    fem::FeVectorField z;
    verification::ErrorPair err;

    Run(const std::string& name, double sigma, int n)
        : mc(verification::manufactured(name, sigma)),
          mesh(build_uniform_mesh(n, mc.problem.domain)),
          u(fem::solve(fem::assemble(mesh, mc.problem))),
          z(recovery::recover_flux(u, mc.problem)),
          err(verification::true_error(mc, u)) {}
};

const Run& run(const std::string& name, double sigma, int n) {
    static std::map<std::tuple<std::string, double, int>, std::unique_ptr<Run>> cache;
    std::unique_ptr<Run>& slot = cache[{name, sigma, n}];
    if (!slot) {
        slot = std::make_unique<Run>(name, sigma, n);
    }
    return *slot;
}

double friedrichs_sigma_star(const Run& r) {
    SigmaStarContext ctx;
    ctx.h = r.mesh.h;
    ctx.problem = &r.mc.problem;
    return estimators::sigma_star(SigmaStarPolicy{}, ctx);
}

const std::vector<int> kLevels{8, 16, 32, 64};

}  // namespace

TEST_CASE("criterion 1: a priori convergence rates for the manufactured cases") {
    bool pass = true;
    std::string detail = "energy window [0.85, 1.15], l2 window [1.8, 2.2];";
    for (const std::string name : {"sinsin", "bubble"}) {
        for (double sigma : {0.0, 1.0, 1e4}) {
            std::vector<std::pair<double, double>> energy, l2;
            for (int n : kLevels) {
                const Run& r = run(name, sigma, n);
                energy.push_back({r.mesh.h, r.err.energy});
                l2.push_back({r.mesh.h, r.err.l2});
            }
            const double se = verification::convergence_rate(energy);
            const double sl = verification::convergence_rate(l2);
            const bool ok = se >= 0.85 && se <= 1.15 && sl >= 1.8 && sl <= 2.2;
            pass = pass && ok;
            detail += " " + name + " sigma=" + fmt(sigma) + ": energy " + fmt(se) + ", l2 " +
                      fmt(sl) + (ok ? ";" : " [out of window];");
        }
    }
    report(1, pass, detail);
    CHECK(pass);
}

TEST_CASE("criterion 2: guaranteed bound holds across the full sweep") {
    const experiment::ExperimentConfig cfg = parse_config(R"({
        "cases": ["sinsin", "bubble", "aniso"],
        "n": [8, 16, 32, 64],
        "sigma": [0, 1, 100, 10000, 1000000],
        "estimators": ["robust"],
        "sigma_star_policy": "global_friedrichs"
    })");
    const SweepResult res = run_sweep(cfg, 4);
    int ok_rows = 0;
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const SweepRow& row : res.rows) {
        if (row.status != "ok") {
            continue;
        }
        ++ok_rows;
        const double margin = std::sqrt(row.total) / row.energy_error;
        worst = std::min(worst, margin);
        if (std::sqrt(row.total) < row.energy_error * (1.0 - 1e-8)) {
            ++violations;
        }
    }
    const bool pass = res.rows.size() == 60 && ok_rows == 60 && violations == 0 &&
                      res.guarantee_violations == 0;
    report(2, pass,
           std::to_string(ok_rows) + "/60 runs ok, " + std::to_string(violations) +
               " violations (pipeline count " + std::to_string(res.guarantee_violations) +
               "), min sqrt(total)/energy " + fmt(worst, 6));
    CHECK(pass);
}

TEST_CASE("criterion 3: oracle effectivity is flat across sigma") {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool finite = true;
    std::string detail = "sinsin n=32, effectivity by sigma:";
    for (double sigma : {0.0, 1.0, 100.0, 1e4, 1e6}) {
        const Run& r = run("sinsin", sigma, 32);
        SigmaStarPolicy pol;
        pol.kind = SigmaStarKind::Oracle;
        SigmaStarContext ctx;
        ctx.h = r.mesh.h;
        ctx.problem = &r.mc.problem;
        ctx.exact_error = ExactErrorPair{r.err.energy, r.err.l2};
        const double ss = estimators::sigma_star(pol, ctx);
        const auto rep = estimators::majorant_robust(r.mesh, r.u, r.z, r.mc.problem, ss);
        const double eff = std::sqrt(rep.total) / r.err.energy;
        finite = finite && std::isfinite(eff);
        lo = std::min(lo, eff);
        hi = std::max(hi, eff);
        detail += " " + fmt(sigma) + " -> " + fmt(eff) + ";";
    }
    const double ratio = hi / lo;
    const bool pass = finite && ratio <= 5.0;
    report(3, pass, detail + " max/min " + fmt(ratio) + " (allowed 5)");
    CHECK(pass);
}

TEST_CASE("criterion 4: robust total decays at the consistent rate") {
    // c_dag calibrated once from the sigma = 0 runs of both cases, then the
    // femscale sigma* = 1/(c_dag h^2) is used for every (case, sigma) line.
    std::vector<estimators::CalibrationRun> cal;
    for (const std::string name : {"sinsin", "bubble"}) {
        for (int n : kLevels) {
            const Run& r = run(name, 0.0, n);
            cal.push_back({r.mesh.h, r.err.energy, r.err.l2});
        }
    }
    const double c_dag = estimators::calibrate_c_dag(cal);
    bool pass = true;
    std::string detail = "c_dag " + fmt(c_dag) + ", slope of log(total) vs log(h), need >= 1.8:";
    for (const std::string name : {"sinsin", "bubble"}) {
        for (double sigma : {0.0, 1.0, 1e4}) {
            std::vector<std::pair<double, double>> pairs;
            for (int n : kLevels) {
                const Run& r = run(name, sigma, n);
                SigmaStarPolicy pol;
                pol.kind = SigmaStarKind::FemScale;
                pol.c_dag = c_dag;
                SigmaStarContext ctx;
                ctx.h = r.mesh.h;
                ctx.problem = &r.mc.problem;
                const double ss = estimators::sigma_star(pol, ctx);
                const auto rep = estimators::majorant_robust(r.mesh, r.u, r.z, r.mc.problem, ss);
                pairs.push_back({r.mesh.h, rep.total});
            }
            const double slope = verification::convergence_rate(pairs);
            const bool ok = slope >= 1.8;
            pass = pass && ok;
            detail += " " + name + " sigma=" + fmt(sigma) + ": " + fmt(slope) +
                      (ok ? ";" : " [too flat];");
        }
    }
    report(4, pass, detail);
    CHECK(pass);
}

TEST_CASE("criterion 5: aubin degenerates at small sigma and coincides past sigma*") {
    const Run& tiny = run("sinsin", 1e-8, 32);
    const double ss_tiny = friedrichs_sigma_star(tiny);
    const auto aubin_tiny = estimators::majorant_aubin(tiny.mesh, tiny.u, tiny.z, tiny.mc.problem);
    const auto robust_tiny =
        estimators::majorant_robust(tiny.mesh, tiny.u, tiny.z, tiny.mc.problem, ss_tiny);
    const double ratio = aubin_tiny.total / robust_tiny.total;

    double max_rel = 0.0;
    for (double sigma : {100.0, 1e4, 1e6}) {
        const Run& r = run("sinsin", sigma, 32);
        const double ss = friedrichs_sigma_star(r);
        const auto aubin = estimators::majorant_aubin(r.mesh, r.u, r.z, r.mc.problem);
        const auto robust = estimators::majorant_robust(r.mesh, r.u, r.z, r.mc.problem, ss);
        max_rel = std::max(max_rel, std::abs(aubin.total - robust.total) / aubin.total);
    }
    const bool pass = ratio >= 100.0 && max_rel <= 1e-12;
    report(5, pass,
           "sigma=1e-8 aubin/robust " + fmt(ratio, 6) + " (need >= 100); sigma >= sigma* max rel gap " +
               fmt(max_rel, 3) + " (allowed 1e-12)");
    CHECK(pass);
}

TEST_CASE("criterion 6: theta branch table") {
    // The three tabulated branch values; all are exact in IEEE arithmetic.
    const auto low = estimators::theta_pair(0.0, 19.7392);
    const auto mid = estimators::theta_pair(19.7392, 19.7392);
    const auto high = estimators::theta_pair(20.0, 10.0);
    const bool pass = low.big == 2.0 && low.small == 1.0 / 19.7392 && mid.big == 1.0 &&
                      mid.small == 1.0 / 19.7392 && high.big == 1.0 && high.small == 0.05;
    report(6, pass,
           "(0, 19.7392) -> (" + fmt(low.big) + ", " + fmt(low.small, 6) + "); (s*, s*) -> (" +
               fmt(mid.big) + ", " + fmt(mid.small, 6) + "); (20, 10) -> (" + fmt(high.big) +
               ", " + fmt(high.small) + ")");
    CHECK(pass);
}

TEST_CASE("criterion 7: friedrichs eigenvalue bracket and reported constant") {
    const Mesh mesh = build_uniform_mesh(64, Rect::unit_square());
    const double lambda = verification::discrete_lambda1(mesh);
    const double lo = 2.0 * pi * pi;
    const double hi = 1.05 * lo;
    const SweepResult res = run_sweep(parse_config(R"({
        "cases": ["sinsin"],
        "n": [8],
        "sigma": [0],
        "estimators": ["robust"]
    })"));
    const bool recorded = res.summary.find("c_omega") != std::string::npos &&
                          res.summary.find("0.05066059182116889") != std::string::npos;
    const bool pass = lambda >= lo && lambda <= hi && recorded;
    report(7, pass,
           "lambda1(n=64) " + fmt(lambda, 10) + " in [" + fmt(lo, 6) + ", " + fmt(hi, 6) +
               "]; c_omega recorded in summary: " + (recorded ? "yes" : "no"));
    CHECK(pass);
}

TEST_CASE("criterion 8: optimizer reaches the analytic minimum") {
    // v = 0, z = (1, 0), f = 1: flux and residual terms are both 1, and both
    // optimized majorants have the closed minimum (a + sqrt(c_omega) b)^2.
    const Mesh mesh = build_uniform_mesh(8, Rect::unit_square());
    const ProblemSpec prob{Matrix2::identity(), 0.0, [](Vec2) { return 1.0; }};
    const AnalyticPotential v([](Vec2) { return 0.0; }, [](Vec2) { return Vec2{0.0, 0.0}; });
    const AnalyticFlux<Vec2 (*)(Vec2), double (*)(Vec2)> z{
        [](Vec2) { return Vec2{1.0, 0.0}; }, [](Vec2) { return 0.0; }};
    const double c_omega = estimators::friedrichs_constant(Rect::unit_square());

    const auto rf = estimators::majorant_repin_frolov(mesh, v, z, prob, std::nullopt, c_omega);
    const double rf_target = std::pow(std::sqrt(rf.flux_term) +
                                          std::sqrt(c_omega) * std::sqrt(rf.residual_term),
                                      2);
    const double rf_rel = std::abs(rf.total - rf_target) / rf_target;

    const auto ch = estimators::majorant_churilova(mesh, v, z, prob, std::nullopt, c_omega);
    const double ch_target = std::pow(std::sqrt(ch.flux_term) +
                                          std::sqrt(c_omega) * std::sqrt(ch.residual_term),
                                      2);
    const double ch_rel = std::abs(ch.total - ch_target) / ch_target;

    const bool pass = rf_rel <= 1e-10 && ch_rel <= 1e-8;
    report(8, pass,
           "repin_frolov auto " + fmt(rf.total, 12) + " vs analytic " + fmt(rf_target, 12) +
               " (rel " + fmt(rf_rel, 3) + ", allowed 1e-10); churilova auto " +
               fmt(ch.total, 12) + " (rel " + fmt(ch_rel, 3) + ", allowed 1e-8)");
    CHECK(pass);
}

TEST_CASE("criterion 9: line-integral bound dominates the H1 seminorm error") {
    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    for (int n : {16, 32}) {
        const Run& r = run("sinsin", 0.0, n);
        // sigma = 0, so the energy norm is exactly the H1 seminorm.
        const double semi_sq = r.err.energy * r.err.energy;
        for (double b : {0.0, 0.5, 1.0}) {
            const auto rep = estimators::majorant_line_integral(
                r.mesh, r.u, r.z, [b](Vec2) { return b; }, r.mc.problem);
            worst = std::min(worst, rep.total / semi_sq);
            pass = pass && rep.total >= semi_sq;
        }
    }
    report(9, pass, "6 runs (n in {16, 32}, beta1 in {0, 1/2, 1}), min total/|e|_1^2 " + fmt(worst, 6));
    CHECK(pass);
}
