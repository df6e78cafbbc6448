// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "majorant/estimators.hpp"
#include "majorant/flux_recovery.hpp"
#include "majorant/manufactured.hpp"
#include "majorant/mesh.hpp"
#include "majorant/solver.hpp"
#include "majorant/verification.hpp"

namespace majorant::experiment {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Validated sweep description. Defaults mirror parse_config.
struct ExperimentConfig {
    std::vector<std::string> cases;
    std::vector<int> n;
    std::vector<double> sigma{0.0};
    std::vector<std::string> estimators{"robust"};
    std::string sigma_star_policy = "global_friedrichs";
    double c_dag = 1.0;
    bool calibrate_c_dag = false;  ///< c_dag given as "calibrate"
    std::string recovery = "area";
    std::string out = "majorant.csv";
    int quad_assembly = 4;
    int quad_error = 6;
    double solver_tol = 1e-10;
    double beta1 = 0.5;
    std::optional<double> eps;  ///< repin_frolov / churilova; AUTO when absent
    std::vector<std::string> warnings;
};

namespace detail {

inline const std::set<std::string>& known_cases() {
    static const std::set<std::string> s{"sinsin", "bubble", "aniso"};
    return s;
}

inline const std::set<std::string>& known_estimators() {
    static const std::set<std::string> s{"robust", "aubin", "repin_frolov", "churilova",
                                         "line_integral"};
    return s;
}

inline const std::set<std::string>& known_policies() {
    static const std::set<std::string> s{"global_friedrichs", "femscale", "oracle"};
    return s;
}

inline std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace detail

/// Parses a flat JSON object into a validated config. Unknown keys are an
/// error (all listed); invalid values name the offending field.
inline ExperimentConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }

    static const std::set<std::string> known_keys{
        "cases",    "n",           "sigma",         "estimators", "sigma_star_policy",
        "c_dag",    "recovery",    "out",           "quad_assembly",
        "quad_error", "solver_tol", "beta1",        "eps"};
    std::vector<std::string> unknown;
    for (const auto& [key, value] : doc.items()) {
        if (!known_keys.contains(key)) unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::sort(unknown.begin(), unknown.end());
        throw ConfigError("unknown config keys: " + detail::join(unknown));
    }

    ExperimentConfig cfg;

    if (!doc.contains("cases") || !doc["cases"].is_array() || doc["cases"].empty()) {
        throw ConfigError("cases: required nonempty array of case names");
    }
    for (const auto& item : doc["cases"]) {
        if (!item.is_string() || !detail::known_cases().contains(item.get<std::string>())) {
            throw ConfigError("cases: entries must be one of sinsin, bubble, aniso");
        }
        cfg.cases.push_back(item.get<std::string>());
    }

    if (!doc.contains("n") || !doc["n"].is_array() || doc["n"].empty()) {
        throw ConfigError("n: required nonempty array of subdivision counts");
    }
    for (const auto& item : doc["n"]) {
        if (!item.is_number_integer() || item.get<int>() < 2) {
            throw ConfigError("n: entries must be integers >= 2");
        }
        cfg.n.push_back(item.get<int>());
    }

    if (doc.contains("sigma")) {
        if (!doc["sigma"].is_array() || doc["sigma"].empty()) {
            throw ConfigError("sigma: must be a nonempty array of numbers");
        }
        cfg.sigma.clear();
        for (const auto& item : doc["sigma"]) {
            if (!item.is_number() || item.get<double>() < 0.0) {
                throw ConfigError("sigma: values must be numbers >= 0");
            }
            cfg.sigma.push_back(item.get<double>());
        }
    }

    if (doc.contains("estimators")) {
        if (!doc["estimators"].is_array() || doc["estimators"].empty()) {
            throw ConfigError("estimators: must be a nonempty array");
        }
        cfg.estimators.clear();
        for (const auto& item : doc["estimators"]) {
            if (!item.is_string() ||
                !detail::known_estimators().contains(item.get<std::string>())) {
                throw ConfigError(
                    "estimators: entries must be one of robust, aubin, repin_frolov, "
                    "churilova, line_integral");
            }
            cfg.estimators.push_back(item.get<std::string>());
        }
    }

    if (doc.contains("sigma_star_policy")) {
        if (!doc["sigma_star_policy"].is_string() ||
            !detail::known_policies().contains(doc["sigma_star_policy"].get<std::string>())) {
            throw ConfigError(
                "sigma_star_policy: must be one of global_friedrichs, femscale, oracle");
        }
        cfg.sigma_star_policy = doc["sigma_star_policy"].get<std::string>();
    }

    if (doc.contains("c_dag")) {
        const auto& v = doc["c_dag"];
        if (v.is_string() && v.get<std::string>() == "calibrate") {
            cfg.calibrate_c_dag = true;
            if (cfg.n.size() < 3) {
                throw ConfigError("c_dag: calibration needs at least 3 mesh levels in n");
            }
        } else if (v.is_number() && v.get<double>() > 0.0) {
            cfg.c_dag = v.get<double>();
        } else {
            throw ConfigError("c_dag: must be a positive number or \"calibrate\"");
        }
    }

    if (doc.contains("recovery")) {
        const std::string r = doc["recovery"].is_string() ? doc["recovery"].get<std::string>() : "";
        if (r != "area" && r != "uniform") {
            throw ConfigError("recovery: must be \"area\" or \"uniform\"");
        }
        cfg.recovery = r;
    }

    if (doc.contains("out")) {
        if (!doc["out"].is_string() || doc["out"].get<std::string>().empty()) {
            throw ConfigError("out: must be a nonempty string path");
        }
        cfg.out = doc["out"].get<std::string>();
    }

    const auto read_quad = [&](const char* key, int& target) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_number_integer() || doc[key].get<int>() < 1 || doc[key].get<int>() > 7) {
            throw ConfigError(std::string(key) + ": must be an integer in 1..7");
        }
        target = doc[key].get<int>();
    };
    read_quad("quad_assembly", cfg.quad_assembly);
    read_quad("quad_error", cfg.quad_error);

    if (doc.contains("solver_tol")) {
        if (!doc["solver_tol"].is_number() || !(doc["solver_tol"].get<double>() > 0.0)) {
            throw ConfigError("solver_tol: must be a positive number");
        }
        cfg.solver_tol = doc["solver_tol"].get<double>();
    }

    if (doc.contains("beta1")) {
        if (!doc["beta1"].is_number() || !std::isfinite(doc["beta1"].get<double>())) {
            throw ConfigError("beta1: must be a finite number");
        }
        cfg.beta1 = doc["beta1"].get<double>();
    }

    if (doc.contains("eps")) {
        if (!doc["eps"].is_number() || !(doc["eps"].get<double>() > 0.0)) {
            throw ConfigError("eps: must be a positive number (omit for AUTO)");
        }
        cfg.eps = doc["eps"].get<double>();
    }

    const bool has_sigma_zero =
        std::any_of(cfg.sigma.begin(), cfg.sigma.end(), [](double s) { return s == 0.0; });
    const bool has_sigma_pos =
        std::any_of(cfg.sigma.begin(), cfg.sigma.end(), [](double s) { return s > 0.0; });
    const auto wants = [&](const char* name) {
        return std::find(cfg.estimators.begin(), cfg.estimators.end(), name) !=
               cfg.estimators.end();
    };
    if (wants("aubin") && has_sigma_zero) {
        cfg.warnings.push_back(
            "aubin is undefined at sigma = 0; those rows will carry an error status");
    }
    if ((wants("repin_frolov") || wants("line_integral")) && has_sigma_pos) {
        cfg.warnings.push_back(
            "repin_frolov and line_integral require sigma = 0; other rows will carry an "
            "error status");
    }
    if (cfg.calibrate_c_dag && cfg.sigma_star_policy != "femscale") {
        cfg.warnings.push_back(
            "c_dag calibration requested but sigma_star_policy is not femscale; the "
            "calibrated value is reported and otherwise unused");
    }
    return cfg;
}

/// One CSV row of the sweep. NaN-valued numeric fields serialize as empty cells.
struct SweepRow {
    std::string case_name;
    int n = 0;
    double h = 0.0;
    double sigma = 0.0;
    std::string estimator;
    std::string policy;
    double sigma_star = std::numeric_limits<double>::quiet_NaN();
    double flux_term = std::numeric_limits<double>::quiet_NaN();
    double residual_term = std::numeric_limits<double>::quiet_NaN();
    double theta_big = std::numeric_limits<double>::quiet_NaN();
    double theta_small = std::numeric_limits<double>::quiet_NaN();
    double eps = std::numeric_limits<double>::quiet_NaN();
    double total = std::numeric_limits<double>::quiet_NaN();
    double energy_error = std::numeric_limits<double>::quiet_NaN();
    double l2_error = std::numeric_limits<double>::quiet_NaN();
    double effectivity = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
};

struct SweepResult {
    std::vector<verification::RunRecord> records;
    std::vector<SweepRow> rows;
    std::string csv;
    std::string summary;
    int guarantee_checked = 0;
    int guarantee_violations = 0;
    double c_dag_used = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr char kCsvHeader[] =
    "case,n,h,sigma,estimator,sigma_star_policy,sigma_star,flux_term,residual_term,"
    "theta_big,theta_small,eps,total,energy_error,l2_error,effectivity,status";

namespace detail {

inline std::string cell(double v) {
    return std::isnan(v) ? std::string() : majorant::detail::shortest(v);
}

inline std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n') c = ';';
    }
    return s;
}

inline std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const SweepRow& r : rows) {
        out += sanitize(r.case_name);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += majorant::detail::shortest(r.h);
        out += ',';
        out += majorant::detail::shortest(r.sigma);
        out += ',';
        out += sanitize(r.estimator);
        out += ',';
        out += sanitize(r.policy);
        out += ',';
        out += cell(r.sigma_star);
        out += ',';
        out += cell(r.flux_term);
        out += ',';
        out += cell(r.residual_term);
        out += ',';
        out += cell(r.theta_big);
        out += ',';
        out += cell(r.theta_small);
        out += ',';
        out += cell(r.eps);
        out += ',';
        out += cell(r.total);
        out += ',';
        out += cell(r.energy_error);
        out += ',';
        out += cell(r.l2_error);
        out += ',';
        out += cell(r.effectivity);
        out += ',';
        out += sanitize(r.status);
        out += '\n';
    }
    return out;
}

/// Guaranteed upper bounds, counted toward the exit-code gate. FemScale rows
/// are informational: the policy is a calibrated heuristic, not a theorem.
inline bool guarantee_applies(const std::string& estimator, const std::string& policy) {
    if (estimator == "robust") return policy != "femscale";
    return estimator == "aubin" || estimator == "churilova" ||
           estimator == "repin_frolov" || estimator == "line_integral";
}

struct Unit {
    std::size_t case_idx = 0;
    std::size_t n_idx = 0;
    std::size_t sigma_idx = 0;
};

struct UnitOutput {
    verification::RunRecord record;
    std::vector<SweepRow> rows;
};

}  // namespace detail

/// Calibration helper: c_dag from sigma = 0 runs of one case over mesh levels.
inline double calibrate_c_dag_for_case(const std::string& case_name,
                                       const std::vector<int>& levels,
                                       int quad_assembly = 4, int quad_error = 6,
                                       double solver_tol = 1e-10) {
    std::vector<estimators::CalibrationRun> runs;
    for (int n : levels) {
        const verification::ManufacturedCase mc = verification::manufactured(case_name, 0.0);
        const Mesh mesh = build_uniform_mesh(n, mc.problem.domain);
        const fem::SparseSystem sys = fem::assemble(mesh, mc.problem, quad_assembly);
        fem::SolveOptions opts;
        opts.rel_tol = solver_tol;
        const fem::FeScalarField u_fem = fem::solve(sys, opts);
        const verification::ErrorPair err = verification::true_error(mc, u_fem, quad_error);
        runs.push_back({mesh.h, err.energy, err.l2});
    }
    return estimators::calibrate_c_dag(runs);
}

namespace detail {

inline UnitOutput run_unit(const ExperimentConfig& cfg, const Unit& unit, double c_dag) {
    const std::string& case_name = cfg.cases[unit.case_idx];
    const int n = cfg.n[unit.n_idx];
    const double sigma = cfg.sigma[unit.sigma_idx];

    UnitOutput out;
    const auto error_rows = [&](const std::string& message, double h) {
        for (const std::string& est : cfg.estimators) {
            SweepRow row;
            row.case_name = case_name;
            row.n = n;
            row.h = h;
            row.sigma = sigma;
            row.estimator = est;
            row.policy = cfg.sigma_star_policy;
            row.status = "error: " + sanitize(message);
            out.rows.push_back(row);
        }
    };

    verification::ManufacturedCase mc = verification::manufactured(case_name, sigma);
    const Mesh mesh = build_uniform_mesh(n, mc.problem.domain);
    out.record.case_name = case_name;
    out.record.n = n;
    out.record.h = mesh.h;
    out.record.sigma = sigma;
    out.record.sigma_star_policy = cfg.sigma_star_policy;

    fem::FeScalarField u_fem(mesh);
    verification::ErrorPair err;
    try {
        const fem::SparseSystem sys = fem::assemble(mesh, mc.problem, cfg.quad_assembly);
        fem::SolveOptions opts;
        opts.rel_tol = cfg.solver_tol;
        u_fem = fem::solve(sys, opts);
        err = verification::true_error(mc, u_fem, cfg.quad_error);
    } catch (const std::exception& e) {
        error_rows(e.what(), mesh.h);
        return out;
    }
    out.record.energy_error = err.energy;
    out.record.l2_error = err.l2;

    recovery::RecoveryConfig rcfg;
    rcfg.weighting = cfg.recovery == "uniform" ? recovery::Weighting::Uniform
                                               : recovery::Weighting::AreaWeighted;
    const fem::FeVectorField z = recovery::recover_flux(u_fem, mc.problem, rcfg);

    estimators::SigmaStarPolicy policy;
    if (cfg.sigma_star_policy == "femscale") {
        policy.kind = estimators::SigmaStarKind::FemScale;
        policy.c_dag = c_dag;
    } else if (cfg.sigma_star_policy == "oracle") {
        policy.kind = estimators::SigmaStarKind::Oracle;
    } else {
        policy.kind = estimators::SigmaStarKind::GlobalFriedrichs;
    }
    estimators::SigmaStarContext ctx;
    ctx.h = mesh.h;
    ctx.problem = &mc.problem;
    ctx.exact_error = estimators::ExactErrorPair{err.energy, err.l2};

    const double c_omega = estimators::friedrichs_constant(mc.problem.domain);

    for (const std::string& est : cfg.estimators) {
        SweepRow row;
        row.case_name = case_name;
        row.n = n;
        row.h = mesh.h;
        row.sigma = sigma;
        row.estimator = est;
        row.policy = cfg.sigma_star_policy;
        row.energy_error = err.energy;
        row.l2_error = err.l2;
        try {
            estimators::MajorantReport rep;
            if (est == "robust") {
                const double ss = estimators::sigma_star(policy, ctx);
                rep = estimators::majorant_robust(mesh, u_fem, z, mc.problem, ss,
                                                  cfg.quad_error);
            } else if (est == "aubin") {
                rep = estimators::majorant_aubin(mesh, u_fem, z, mc.problem, cfg.quad_error);
            } else if (est == "repin_frolov") {
                rep = estimators::majorant_repin_frolov(mesh, u_fem, z, mc.problem, cfg.eps,
                                                        c_omega, cfg.quad_error);
            } else if (est == "churilova") {
                rep = estimators::majorant_churilova(mesh, u_fem, z, mc.problem, cfg.eps,
                                                     c_omega / mc.problem.mu1,
                                                     cfg.quad_error);
            } else {
                const double beta1 = cfg.beta1;
                rep = estimators::majorant_line_integral(
                    mesh, u_fem, z, [beta1](Vec2) { return beta1; }, mc.problem,
                    cfg.quad_error);
            }
            row.sigma_star = rep.sigma_star;
            row.flux_term = rep.flux_term;
            row.residual_term = rep.residual_term;
            row.theta_big = rep.theta_big;
            row.theta_small = rep.theta_small;
            row.eps = rep.eps;
            row.total = rep.total;
            if (err.energy > 0.0) {
                row.effectivity = verification::effectivity(rep, err.energy);
            }
            if (guarantee_applies(est, cfg.sigma_star_policy) &&
                rep.total < err.energy * err.energy * (1.0 - 1e-8)) {
                row.status = "guarantee violated";
            }
            out.record.reports.push_back(std::move(rep));
        } catch (const std::exception& e) {
            row.status = "error: " + sanitize(e.what());
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline void append_summary(std::string& text, const ExperimentConfig& cfg,
                           const SweepResult& result) {
    const auto shortest = [](double v) { return majorant::detail::shortest(v); };
    text += "sweep summary\n";
    text += "  rows: " + std::to_string(result.rows.size()) + "\n";
    text += "  cases: " + detail::join(cfg.cases) + "\n";
    {
        std::string ns;
        for (std::size_t i = 0; i < cfg.n.size(); ++i) {
            if (i) ns += ", ";
            ns += std::to_string(cfg.n[i]);
        }
        text += "  n: " + ns + "\n";
    }
    {
        std::string ss;
        for (std::size_t i = 0; i < cfg.sigma.size(); ++i) {
            if (i) ss += ", ";
            ss += shortest(cfg.sigma[i]);
        }
        text += "  sigma: " + ss + "\n";
    }
    text += "  sigma_star_policy: " + cfg.sigma_star_policy;
    if (cfg.sigma_star_policy == "femscale") {
        text += " (c_dag = " + shortest(result.c_dag_used) + ")";
    }
    text += "\n";
    text += "  recovery: " + cfg.recovery + "\n";
    text += "  quadrature: assembly order " + std::to_string(cfg.quad_assembly) +
            ", error/majorant order " + std::to_string(cfg.quad_error) + "\n";
    const double c_omega =
        estimators::friedrichs_constant(verification::manufactured(cfg.cases[0], 0.0)
                                            .problem.domain);
    text += "  friedrichs c_omega (|v|^2 <= c_omega |grad v|^2): " + shortest(c_omega) + "\n";
    text += "  guarantee: checked " + std::to_string(result.guarantee_checked) +
            " rows, violations " + std::to_string(result.guarantee_violations) + "\n";

    for (const std::string& est : cfg.estimators) {
        text += "estimator " + est + "\n";
        // Rate fits per (case, sigma) over the mesh levels.
        for (const std::string& case_name : cfg.cases) {
            for (double sigma : cfg.sigma) {
                std::vector<std::pair<double, double>> pairs;
                for (const SweepRow& row : result.rows) {
                    if (row.estimator == est && row.case_name == case_name &&
                        row.sigma == sigma && row.status == "ok" && row.total > 0.0) {
                        pairs.push_back({row.h, row.total});
                    }
                }
                text += "  rate " + case_name + " sigma=" + shortest(sigma) + ": ";
                if (pairs.size() >= 3) {
                    text += "slope " + shortest(verification::convergence_rate(pairs));
                } else {
                    text += "n/a (need >= 3 levels)";
                }
                text += "\n";
            }
        }
        double eff_min = std::numeric_limits<double>::infinity();
        double eff_max = 0.0;
        int ok_rows = 0, bad_rows = 0;
        for (const SweepRow& row : result.rows) {
            if (row.estimator != est) continue;
            if (row.status.rfind("error:", 0) == 0) {
                ++bad_rows;
                continue;
            }
            ++ok_rows;
            if (!std::isnan(row.effectivity)) {
                eff_min = std::min(eff_min, row.effectivity);
                eff_max = std::max(eff_max, row.effectivity);
            }
        }
        text += "  effectivity: ";
        if (ok_rows > 0 && eff_max > 0.0) {
            text += "min " + shortest(eff_min) + ", max " + shortest(eff_max) + ", ratio " +
                    shortest(eff_max / eff_min);
        } else {
            text += "n/a";
        }
        text += "\n";
        text += "  rows: " + std::to_string(ok_rows) + " ok, " + std::to_string(bad_rows) +
                " error\n";
    }
}

}  // namespace detail

/// Runs the sweep in config order (case, n, sigma, estimator innermost).
/// Sweep points may run on several threads; rows are emitted in deterministic
/// config order regardless of thread count.
inline SweepResult run_sweep(const ExperimentConfig& cfg, int threads = 1) {
    SweepResult result;
    double c_dag = cfg.c_dag;
    if (cfg.calibrate_c_dag) {
        c_dag = calibrate_c_dag_for_case(cfg.cases[0], cfg.n, cfg.quad_assembly,
                                         cfg.quad_error, cfg.solver_tol);
    }
    if (cfg.sigma_star_policy == "femscale") result.c_dag_used = c_dag;

    std::vector<detail::Unit> units;
    for (std::size_t c = 0; c < cfg.cases.size(); ++c) {
        for (std::size_t i = 0; i < cfg.n.size(); ++i) {
            for (std::size_t s = 0; s < cfg.sigma.size(); ++s) {
                units.push_back({c, i, s});
            }
        }
    }
    std::vector<detail::UnitOutput> outputs(units.size());
    const int worker_count = std::max(1, std::min<int>(threads, static_cast<int>(units.size())));
    if (worker_count == 1) {
        for (std::size_t i = 0; i < units.size(); ++i) {
            outputs[i] = detail::run_unit(cfg, units[i], c_dag);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next.fetch_add(1); i < units.size(); i = next.fetch_add(1)) {
                outputs[i] = detail::run_unit(cfg, units[i], c_dag);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int t = 0; t < worker_count; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    for (detail::UnitOutput& out : outputs) {
        result.records.push_back(std::move(out.record));
        for (SweepRow& row : out.rows) {
            if (row.status == "ok" &&
                detail::guarantee_applies(row.estimator, cfg.sigma_star_policy)) {
                ++result.guarantee_checked;
            } else if (row.status == "guarantee violated") {
                ++result.guarantee_checked;
                ++result.guarantee_violations;
            }
            result.rows.push_back(std::move(row));
        }
    }
    result.csv = detail::to_csv(result.rows);
    detail::append_summary(result.summary, cfg, result);
    return result;
}

}  // namespace majorant::experiment
