// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Drive a sweep through the same entry point the CLI uses and print the
// summary plus the first few CSV rows.

#include <cstdio>
#include <sstream>
#include <string>

#include "majorant/majorant.hpp"

int main() {
    const std::string config = R"({
        "cases": ["sinsin", "bubble"],
        "n": [8, 16, 32],
        "sigma": [0, 1.0, 10000.0],
        "estimators": ["robust", "churilova"],
        "sigma_star_policy": "global_friedrichs"
    })";

    const majorant::experiment::ExperimentConfig cfg = majorant::experiment::parse_config(config);
    const majorant::experiment::SweepResult result = majorant::experiment::run_sweep(cfg, 2);

    std::fputs(result.summary.c_str(), stdout);
    std::puts("--- first rows ---");
    std::istringstream csv(result.csv);
    std::string line;
    for (int i = 0; i < 5 && std::getline(csv, line); ++i) {
        std::puts(line.c_str());
    }
    return result.guarantee_violations == 0 ? 0 : 1;
}
