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

#ifndef QMTK_ERRDIST_HPP
#define QMTK_ERRDIST_HPP

// Noise and disturbance of measuring processes, their POVM/operation trace
// formulas, and the uncertainty-relation evaluators.

#include <string>

#include "qmtk/instruments.hpp"

namespace qmtk {

enum class Method { Direct, Formula };

struct NoiseDisturbance {
    Op noise;        // N(A) = U^dagger (1 (x) M) U - A (x) 1
    Op disturbance;  // D(B) = U^dagger (B (x) 1) U - B (x) 1
};

NoiseDisturbance noise_disturbance_operators(const MeasuringProcess &mp, const Observable &a, const Observable &b);

/// Pi^(n) = sum_x x^n Pi({x}).
Op moment_operator(const Povm &povm, int n);

/// rms noise eps(A). Direct: <N(A)^2>^(1/2) in rho (x) rho0. Formula: from
/// the POVM of the process alone.
double rms_noise(const MeasuringProcess &mp, const Observable &a, const DensityState &rho,
                 Method method = Method::Direct);
double rms_noise(const CpInstrument &inst, const Observable &a, const DensityState &rho);
double rms_noise(const Povm &povm, const Observable &a, const DensityState &rho);

/// rms disturbance eta(B). Direct: <D(B)^2>^(1/2). Formula: from the total
/// operation T alone.
double rms_disturbance(const MeasuringProcess &mp, const Observable &b, const DensityState &rho,
                       Method method = Method::Direct);
double rms_disturbance(const CpInstrument &inst, const Observable &b, const DensityState &rho);

/// <N(A)> and <D(B)>.
double mean_noise(const MeasuringProcess &mp, const Observable &a, const DensityState &rho,
                  Method method = Method::Direct);
double mean_noise(const Povm &povm, const Observable &a, const DensityState &rho);
double mean_disturbance(const MeasuringProcess &mp, const Observable &b, const DensityState &rho,
                        Method method = Method::Direct);
double mean_disturbance(const CpInstrument &inst, const Observable &b, const DensityState &rho);

/// Mean noise operator n(A) = Pi^(1) - A and mean disturbance operator
/// d(B) = T^*(B) - B.
Op mean_noise_operator(const Povm &povm, const Observable &a);
Op mean_disturbance_operator(const CpInstrument &inst, const Observable &b);

/// 1/2 |Tr([A, B] rho)|.
double commutator_bound(const Observable &a, const Observable &b, const DensityState &rho);

struct ErrorReport {
    double epsilon = 0.0;
    double eta = 0.0;
    double sigma_a = 0.0;
    double sigma_b = 0.0;
    double commutator_bound = 0.0;
    double mean_noise = 0.0;
    double mean_disturbance = 0.0;
};

ErrorReport error_report(const MeasuringProcess &mp, const Observable &a, const Observable &b,
                         const DensityState &rho);
ErrorReport error_report(const CpInstrument &inst, const Observable &a, const Observable &b,
                         const DensityState &rho);

std::string to_json(const ErrorReport &r);
std::string csv_header(const ErrorReport &);
std::string to_csv_row(const ErrorReport &r);

inline constexpr double kRelationSlack = 1e-9;

struct UniversalCheck {
    double lhs;  // eps*eta + eps*sigma(B) + sigma(A)*eta
    double rhs;  // 1/2 |Tr([A,B] rho)|
    bool holds;
    ErrorReport report;
};

UniversalCheck check_universal_relation(const MeasuringProcess &mp, const Observable &a, const Observable &b,
                                        const DensityState &rho);
UniversalCheck check_universal_relation(const CpInstrument &inst, const Observable &a, const Observable &b,
                                        const DensityState &rho);

struct HeisenbergCheck {
    double lhs;  // eps * eta
    double rhs;
    bool holds;             // lhs >= rhs - slack
    double condition_term;  // 1/2 |Tr(([n(A),B] + [A,d(B)]) rho)|
    bool condition_holds;   // lhs + condition_term >= rhs - slack
};

HeisenbergCheck check_heisenberg_relation(const MeasuringProcess &mp, const Observable &a, const Observable &b,
                                          const DensityState &rho);
HeisenbergCheck check_heisenberg_relation(const CpInstrument &inst, const Observable &a, const Observable &b,
                                          const DensityState &rho);

}  // namespace qmtk

#endif  // QMTK_ERRDIST_HPP
