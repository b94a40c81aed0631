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

#ifndef QMTK_EXPERIMENTS_HPP
#define QMTK_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qmtk {

struct GridConfig {
    std::size_t n_points = 256;
    double length = 10.0;
    double state_width = 0.5;  // object Gaussian, position std
    double probe_width = 0.5;  // probe Gaussian, position std
};

struct RunConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    std::size_t trials = 0;  // 0: experiment default
    std::vector<std::size_t> dims;
    GridConfig grid;
    double hbar = 1.0;
    std::map<std::string, double> tolerances;  // overrides of pass thresholds
    std::map<std::string, double> params;      // experiment-specific scalars
    std::string document;                      // full JSON config, for structured inputs
};

/// Parses a JSON config. Unknown experiments and malformed fields raise
/// UsageError / ParseError.
RunConfig parse_run_config(const std::string &json_text);

using Field = std::variant<std::int64_t, double, bool, std::string>;

struct Report {
    std::string experiment;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    double hbar = 1.0;
    std::vector<std::pair<std::string, double>> tolerances;
    std::vector<std::pair<std::string, Field>> summary;
    std::vector<std::string> columns;
    std::vector<std::vector<Field>> rows;
    std::size_t violations = 0;

    bool passed() const {
        return violations == 0;
    }
    /// 0 when no invariant was violated, 1 otherwise.
    int exit_code() const {
        return passed() ? 0 : 1;
    }
    const Field *find(const std::string &key) const;
    double number(const std::string &key) const;

    std::string to_json() const;
    std::string to_csv() const;
};

const std::vector<std::string> &registered_experiments();
const std::vector<std::string> &registered_suites();

Report run_experiment(const RunConfig &config);

/// Audit suite with default parameters: roundtrip, cp-check, way, yanase,
/// ozawa, gate, wigner, logic, simultaneity.
Report random_audit(const std::string &suite, std::uint64_t seed, std::size_t trials, double hbar = 1.0);

/// Worker count: hardware concurrency capped by QMTK_THREADS.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on worker_count() threads. Exceptions are
/// rethrown for the lowest failing index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace qmtk

#endif  // QMTK_EXPERIMENTS_HPP
