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

#include <gtest/gtest.h>

#include <atomic>
#include <numbers>

#include "qmtk/error.hpp"
#include "qmtk/experiments.hpp"

using namespace qmtk;

TEST(Config, ParsesFields) {
    const RunConfig c = parse_run_config(R"({
        "experiment": "gate-infidelity-audit", "seed": 9, "trials": 3, "hbar": 2.0,
        "grid": {"n_points": 64, "length": 8.0},
        "tolerances": {"relation_slack": 1e-8}, "N": 2, "params": {"theta": 1.0}
    })");
    EXPECT_EQ(c.experiment, "gate-infidelity-audit");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.trials, 3u);
    EXPECT_EQ(c.hbar, 2.0);
    EXPECT_EQ(c.grid.n_points, 64u);
    EXPECT_EQ(c.grid.length, 8.0);
    EXPECT_EQ(c.grid.probe_width, 0.5);
    EXPECT_EQ(c.tolerances.at("relation_slack"), 1e-8);
    EXPECT_EQ(c.params.at("N"), 2.0);
    EXPECT_EQ(c.params.at("theta"), 1.0);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_run_config(R"({"experiment": "no-such-thing"})"), UsageError);
    EXPECT_THROW(parse_run_config(R"({"seed": 1})"), UsageError);
    EXPECT_THROW(parse_run_config(R"({"experiment": "cp-check", "trials": 0})"), UsageError);
    EXPECT_THROW(parse_run_config(R"({"experiment": "cp-check", "seed": "x"})"), ParseError);
    EXPECT_THROW(parse_run_config("[1, 2"), ParseError);
    EXPECT_THROW(random_audit("no-such-suite", 1, 1), UsageError);
}

TEST(Registry, ListsEverySuite) {
    const auto &s = registered_suites();
    for (const char *name : {"roundtrip", "cp-check", "way", "yanase", "ozawa", "gate", "wigner", "logic",
                             "simultaneity"})
        EXPECT_NE(std::find(s.begin(), s.end(), name), s.end()) << name;
    EXPECT_GE(registered_experiments().size(), 9u);
}

TEST(Reports, DeterministicAcrossRuns) {
    const Report a = random_audit("ozawa", 5, 12), b = random_audit("ozawa", 5, 12);
    EXPECT_EQ(a.to_json(), b.to_json());
    EXPECT_EQ(a.to_csv(), b.to_csv());
    EXPECT_NE(a.to_json(), random_audit("ozawa", 6, 12).to_json());
    EXPECT_TRUE(a.passed());
    EXPECT_EQ(a.rows.size(), 12u);
    EXPECT_EQ(a.rows.front().size(), a.columns.size());
    EXPECT_NE(a.to_json().find("\"summary\""), std::string::npos);
}

TEST(Reports, CsvHasHeaderAndOneLinePerRow) {
    const Report r = random_audit("roundtrip", 2, 7);
    const std::string csv = r.to_csv();
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 8u);
    EXPECT_THROW(r.number("no-such-key"), UsageError);
}

TEST(Experiments, ContractiveModelViolatesHeisenberg) {
    RunConfig c;
    c.experiment = "contractive-model";
    c.grid.n_points = 64;
    const Report r = run_experiment(c);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.number("epsilon"), 0.0);
    EXPECT_EQ(r.number("heisenberg_holds"), 0.0);
    EXPECT_EQ(r.number("universal_holds"), 1.0);
    EXPECT_GT(r.number("commutator_bound"), 0.49);
}

TEST(Experiments, GateAuditForHalfTurn) {
    const Report r = run_experiment(
        parse_run_config(R"({"experiment": "gate-infidelity-audit", "N": 1, "theta": 3.141592653589793,
                             "trials": 4, "seed": 3})"));
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.number("implementations"), 4.0);
    EXPECT_GE(r.number("min_margin"), -1e-9);
}

TEST(Experiments, SmallAuditsPass) {
    for (const char *suite : {"cp-check", "way", "yanase", "wigner", "logic", "simultaneity"}) {
        const Report r = random_audit(suite, 1, 6);
        EXPECT_TRUE(r.passed()) << suite;
    }
}

TEST(Experiments, ViolationIsReported) {
    RunConfig c;
    c.experiment = "vn-model";
    c.grid.n_points = 64;
    c.tolerances["heisenberg_slack"] = -1.0;
    const Report r = run_experiment(c);
    EXPECT_FALSE(r.passed());
    EXPECT_EQ(r.exit_code(), 1);
}

TEST(Parallel, CoversEveryIndexAndRethrows) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, [&](std::size_t i) { hits[i]++; });
    for (const auto &h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(10,
                              [](std::size_t i) {
                                  if (i == 7) throw DomainError("boom");
                              }),
                 DomainError);
    EXPECT_GE(worker_count(), 1u);
}
