// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "majorant/majorant.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override, int threads) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read config file '" << config_path << "'\n";
        return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    majorant::experiment::ExperimentConfig cfg;
    try {
        cfg = majorant::experiment::parse_config(buffer.str());
    } catch (const majorant::experiment::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    for (const std::string& w : cfg.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    if (!out_override.empty()) cfg.out = out_override;

    const majorant::experiment::SweepResult result = majorant::experiment::run_sweep(cfg, threads);

    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << cfg.out << "'\n";
        return 1;
    }
    out << result.csv;
    out.close();

    std::cout << result.summary;
    std::cout << "csv: " << cfg.out << "\n";
    if (result.guarantee_violations > 0) {
        std::cerr << "error: " << result.guarantee_violations
                  << " guaranteed-bound violation(s), see rows with status 'guarantee violated'\n";
        return 2;
    }
    return 0;
}

int cmd_calibrate(const std::string& case_name, const std::vector<int>& levels) {
    if (levels.size() < 3) {
        std::cerr << "error: calibration needs at least 3 mesh levels\n";
        return 1;
    }
    for (int n : levels) {
        if (n < 2) {
            std::cerr << "error: mesh levels must be >= 2\n";
            return 1;
        }
    }
    const double c_dag = majorant::experiment::calibrate_c_dag_for_case(case_name, levels);
    std::cout << majorant::detail::shortest(c_dag) << "\n";
    return 0;
}

int cmd_lambda1(int n) {
    const majorant::Mesh mesh = majorant::build_uniform_mesh(n, majorant::Rect::unit_square());
    const double lambda = majorant::verification::discrete_lambda1(mesh);
    std::cout << majorant::detail::shortest(lambda) << "\n";
    return 0;
}

int cmd_mesh(int n, const std::string& out_path) {
    const majorant::Mesh mesh = majorant::build_uniform_mesh(n, majorant::Rect::unit_square());
    if (out_path.empty()) {
        majorant::write_mesh_text(mesh, std::cout);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 1;
    }
    majorant::write_mesh_text(mesh, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"guaranteed a posteriori error majorants for diffusion-reaction problems"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a config-driven sweep and write a CSV");
    std::string config_path;
    run->add_option("--config", config_path, "JSON config file")->required();
    std::string out_override;
    run->add_option("--out", out_override, "CSV output path (overrides the config)");
    int threads = 1;
    run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    auto* calibrate = app.add_subcommand("calibrate", "print c_dag calibrated on sigma = 0 runs");
    std::string case_name = "sinsin";
    calibrate->add_option("--case", case_name, "manufactured case")
        ->check(CLI::IsMember({"sinsin", "bubble", "aniso"}));
    std::vector<int> levels{8, 16, 32};
    calibrate->add_option("--levels", levels, "mesh levels, comma separated")->delimiter(',');

    auto* lambda1 = app.add_subcommand("lambda1", "print the discrete smallest Dirichlet eigenvalue");
    int n_lambda = 64;
    lambda1->add_option("--n", n_lambda, "subdivisions per side")->check(CLI::PositiveNumber);

    auto* mesh_dump = app.add_subcommand("mesh", "dump a structured unit-square mesh as text");
    int n_mesh = 4;
    mesh_dump->add_option("--n", n_mesh, "subdivisions per side")->check(CLI::PositiveNumber);
    std::string mesh_out;
    mesh_dump->add_option("--out", mesh_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_override, threads);
        if (calibrate->parsed()) return cmd_calibrate(case_name, levels);
        if (lambda1->parsed()) return cmd_lambda1(n_lambda);
        if (mesh_dump->parsed()) return cmd_mesh(n_mesh, mesh_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
