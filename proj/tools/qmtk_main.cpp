// Copyright 2026 The qmtk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmtk command-line front end.
//
//   qmtk run --config <path> [--hbar H] [--json P] [--csv P]
//   qmtk audit <suite> --seed S --trials N [--out DIR] [--hbar H] [--json P] [--csv P]
//   qmtk list
//
// Exit codes: 0 success, 1 invariant violation or numerical failure, 2 usage
// error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qmtk/qmtk.h"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct Owned {
    char *s = nullptr;
    ~Owned() {
        qmtk_string_free(s);
    }
};

int exit_for(qmtk_status s) {
    switch (s) {
    case QMTK_OK:
        return 0;
    case QMTK_ERR_USAGE:
    case QMTK_ERR_PARSE:
    case QMTK_ERR_DOMAIN:
    case QMTK_ERR_NULL_ARGUMENT:
        return kExitUsage;
    default:
        return kExitViolation;
    }
}

bool write_file(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    f << text;
    return static_cast<bool>(f);
}

struct Outputs {
    std::string json_path;
    std::string csv_path;
    std::string out_dir;
};

int emit(qmtk_report *report, const std::string &stem, const Outputs &o) {
    Owned json, csv;
    if (qmtk_report_json(report, &json.s) != QMTK_OK || qmtk_report_csv(report, &csv.s) != QMTK_OK) {
        std::cerr << "qmtk: " << qmtk_last_error() << "\n";
        return kExitViolation;
    }
    bool wrote = false;
    auto put = [&](const std::filesystem::path &p, const char *text) {
        if (!write_file(p, text)) {
            std::cerr << "qmtk: cannot write " << p.string() << "\n";
            return false;
        }
        wrote = true;
        return true;
    };
    if (!o.out_dir.empty()) {
        const std::filesystem::path dir(o.out_dir);
        if (!put(dir / (stem + ".json"), json.s) || !put(dir / (stem + ".csv"), csv.s)) return kExitUsage;
    }
    if (!o.json_path.empty() && !put(o.json_path, json.s)) return kExitUsage;
    if (!o.csv_path.empty() && !put(o.csv_path, csv.s)) return kExitUsage;
    if (!wrote) std::cout << json.s;

    const size_t violations = qmtk_report_violations(report);
    std::cerr << "qmtk: " << stem << (violations == 0 ? " passed" : " FAILED") << " (" << violations
              << " violation" << (violations == 1 ? "" : "s") << ")\n";
    return violations == 0 ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qmtk: quantum measurement theory toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qmtk_version()));

    Outputs outputs;
    double hbar = 0.0;

    auto *run = app.add_subcommand("run", "Run an experiment from a JSON config");
    std::string config_path;
    run->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    auto *audit = app.add_subcommand("audit", "Run a randomized audit suite");
    std::string suite;
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    audit->add_option("suite", suite, "Suite name")->required();
    audit->add_option("--seed", seed, "Seed");
    audit->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
    audit->add_option("--out", outputs.out_dir, "Directory for <suite>.json and <suite>.csv");

    for (auto *cmd : {run, audit}) {
        cmd->add_option("--hbar", hbar, "Override hbar")->check(CLI::PositiveNumber);
        cmd->add_option("--json", outputs.json_path, "Write the JSON report here");
        cmd->add_option("--csv", outputs.csv_path, "Write the CSV rows here");
    }

    app.add_subcommand("list", "List experiments and audit suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    qmtk_report *report = nullptr;
    qmtk_status status = QMTK_OK;
    std::string stem;

    if (app.got_subcommand("list")) {
        std::cout << "experiments: ozawa-audit heisenberg-violation-demo vn-model contractive-model way-audit "
                     "yanase-bound gate-infidelity-audit logic-eval simultaneity-demo realization-roundtrip "
                     "cp-check wigner-chain\n"
                     "suites: roundtrip cp-check way yanase ozawa gate wigner logic simultaneity\n";
        return 0;
    }
    if (app.got_subcommand(run)) {
        std::ifstream f(config_path);
        std::stringstream ss;
        ss << f.rdbuf();
        status = qmtk_run_experiment(ss.str().c_str(), hbar, &report);
        stem = std::filesystem::path(config_path).stem().string();
    } else {
        status = qmtk_random_audit(suite.c_str(), seed, trials, hbar > 0.0 ? hbar : 1.0, &report);
        stem = suite;
    }
    if (status != QMTK_OK) {
        std::cerr << "qmtk: " << qmtk_status_string(status) << ": " << qmtk_last_error() << "\n";
        return exit_for(status);
    }
    const int rc = emit(report, stem, outputs);
    qmtk_report_free(report);
    return rc;
}
