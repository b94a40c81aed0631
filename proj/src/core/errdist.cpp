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

#include "qmtk/errdist.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace qmtk {

namespace {

constexpr double kNegativeSquareLimit = -1e-9;

double rms_from_square(double sq, const char *what) {
    if (sq < kNegativeSquareLimit) {
        std::ostringstream os;
        os << what << ": squared rms value " << sq << " is negative beyond rounding";
        throw NumericalConsistencyError(os.str());
    }
    return sq > 0.0 ? std::sqrt(sq) : 0.0;
}

void require_object_dim(std::size_t dim, const Op &x, const char *what) {
    if (static_cast<std::size_t>(x.rows()) != dim) throw ShapeError(std::string(what) + ": observable dimension mismatch");
}

void require_object_dim(std::size_t dim, const DensityState &rho, const char *what) {
    if (rho.dim() != dim) throw ShapeError(std::string(what) + ": state dimension mismatch");
}

/// rho = sum_i p_i |psi_i><psi_i|, dropping numerically null components.
struct StateEnsemble {
    std::vector<double> weights;
    std::vector<Ket> vectors;
};

StateEnsemble ensemble_of(const DensityState &rho) {
    Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(rho.op()));
    StateEnsemble e;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double p = es.eigenvalues()(k);
        if (p <= 1e-15) continue;
        e.weights.push_back(p);
        e.vectors.push_back(es.eigenvectors().col(k));
    }
    return e;
}

DensityState joint_state(const MeasuringProcess &mp, const DensityState &rho) {
    return tensor(rho, mp.probe_state());
}

Op heisenberg_meter(const MeasuringProcess &mp) {
    const Op &u = mp.unitary();
    return u.adjoint() * kron(identity(mp.object_dim()), mp.meter().op()) * u;
}

}  // namespace

NoiseDisturbance noise_disturbance_operators(const MeasuringProcess &mp, const Observable &a, const Observable &b) {
    require_object_dim(mp.object_dim(), a.op(), "noise_disturbance_operators");
    require_object_dim(mp.object_dim(), b.op(), "noise_disturbance_operators");
    const Op &u = mp.unitary();
    const Op probe_one = identity(mp.probe_dim());
    const Op b1 = kron(b.op(), probe_one);
    return {heisenberg_meter(mp) - kron(a.op(), probe_one), u.adjoint() * b1 * u - b1};
}

Op moment_operator(const Povm &povm, int n) {
    if (n < 1) throw DomainError("moment_operator: order must be positive");
    const auto d = static_cast<Eigen::Index>(povm.dim());
    Op m = Op::Zero(d, d);
    for (const auto &o : povm.outcomes()) m += std::pow(o.value, n) * o.effect;
    return m;
}

// ---------------------------------------------------------------------------
// Formula evaluations. The trace expressions
//   eps^2 = Tr[Pi2 rho] - Tr[Pi1 rho A] - Tr[Pi1 A rho] + Tr[A^2 rho]
//   eta^2 = Tr[B^2 T(rho)] - Tr[B T(rho B)] - Tr[B T(B rho)] + Tr[B^2 rho]
// are summed in the equivalent form (using sum_x Pi(x) = 1 = sum K^dagger K)
//   eps^2 = sum_x sum_i p_i <(x - A) psi_i | Pi(x) | (x - A) psi_i>
//   eta^2 = sum_K sum_i p_i || [K, B] psi_i ||^2
// which avoids cancellation between the four terms.

double rms_noise(const Povm &povm, const Observable &a, const DensityState &rho) {
    require_object_dim(povm.dim(), a.op(), "rms_noise");
    require_object_dim(povm.dim(), rho, "rms_noise");
    const auto ens = ensemble_of(rho);
    double sq = 0.0;
    for (const auto &o : povm.outcomes()) {
        for (std::size_t i = 0; i < ens.vectors.size(); ++i) {
            const Ket v = o.value * ens.vectors[i] - a.op() * ens.vectors[i];
            sq += ens.weights[i] * v.dot(o.effect * v).real();
        }
    }
    return rms_from_square(sq, "rms_noise");
}

double rms_noise(const CpInstrument &inst, const Observable &a, const DensityState &rho) {
    require_object_dim(inst.dim(), a.op(), "rms_noise");
    require_object_dim(inst.dim(), rho, "rms_noise");
    const auto ens = ensemble_of(rho);
    std::vector<Ket> a_psi;
    for (const auto &v : ens.vectors) a_psi.push_back(a.op() * v);
    double sq = 0.0;
    for (const auto &o : inst.outcomes()) {
        for (std::size_t i = 0; i < ens.vectors.size(); ++i) {
            const Ket v = o.value * ens.vectors[i] - a_psi[i];
            for (const auto &k : o.kraus) sq += ens.weights[i] * (k * v).squaredNorm();
        }
    }
    return rms_from_square(sq, "rms_noise");
}

double rms_disturbance(const CpInstrument &inst, const Observable &b, const DensityState &rho) {
    require_object_dim(inst.dim(), b.op(), "rms_disturbance");
    require_object_dim(inst.dim(), rho, "rms_disturbance");
    const auto ens = ensemble_of(rho);
    std::vector<Ket> b_psi;
    for (const auto &v : ens.vectors) b_psi.push_back(b.op() * v);
    double sq = 0.0;
    for (const auto &o : inst.outcomes())
        for (const auto &k : o.kraus)
            for (std::size_t i = 0; i < ens.vectors.size(); ++i) {
                const Ket v = k * b_psi[i] - b.op() * (k * ens.vectors[i]);
                sq += ens.weights[i] * v.squaredNorm();
            }
    return rms_from_square(sq, "rms_disturbance");
}

double rms_noise(const MeasuringProcess &mp, const Observable &a, const DensityState &rho, Method method) {
    require_object_dim(mp.object_dim(), a.op(), "rms_noise");
    require_object_dim(mp.object_dim(), rho, "rms_noise");
    if (method == Method::Formula) return rms_noise(instrument_of_process(mp), a, rho);
    const Op n = heisenberg_meter(mp) - kron(a.op(), identity(mp.probe_dim()));
    return rms_from_square(expectation(n * n, joint_state(mp, rho)), "rms_noise");
}

double rms_disturbance(const MeasuringProcess &mp, const Observable &b, const DensityState &rho, Method method) {
    require_object_dim(mp.object_dim(), b.op(), "rms_disturbance");
    require_object_dim(mp.object_dim(), rho, "rms_disturbance");
    if (method == Method::Formula) return rms_disturbance(instrument_of_process(mp), b, rho);
    const Op &u = mp.unitary();
    const Op b1 = kron(b.op(), identity(mp.probe_dim()));
    const Op dist = u.adjoint() * b1 * u - b1;
    return rms_from_square(expectation(dist * dist, joint_state(mp, rho)), "rms_disturbance");
}

// ---------------------------------------------------------------------------

double mean_noise(const Povm &povm, const Observable &a, const DensityState &rho) {
    require_object_dim(povm.dim(), rho, "mean_noise");
    return expectation(moment_operator(povm, 1), rho) - expectation(a.op(), rho);
}

double mean_disturbance(const CpInstrument &inst, const Observable &b, const DensityState &rho) {
    require_object_dim(inst.dim(), rho, "mean_disturbance");
    return trace_product(b.op(), inst.total(rho.op())).real() - expectation(b.op(), rho);
}

double mean_noise(const MeasuringProcess &mp, const Observable &a, const DensityState &rho, Method method) {
    if (method == Method::Formula) return mean_noise(povm_of_instrument(instrument_of_process(mp)), a, rho);
    const Op n = heisenberg_meter(mp) - kron(a.op(), identity(mp.probe_dim()));
    return expectation(n, joint_state(mp, rho));
}

double mean_disturbance(const MeasuringProcess &mp, const Observable &b, const DensityState &rho, Method method) {
    if (method == Method::Formula) return mean_disturbance(instrument_of_process(mp), b, rho);
    const Op &u = mp.unitary();
    const Op b1 = kron(b.op(), identity(mp.probe_dim()));
    return expectation(u.adjoint() * b1 * u - b1, joint_state(mp, rho));
}

namespace {

/// sum_x x^n I({x})^*(1) without materializing every effect.
Op instrument_moment(const CpInstrument &inst, int n) {
    const Op one = identity(inst.dim());
    Op m = Op::Zero(one.rows(), one.cols());
    for (const auto &o : inst.outcomes()) m += std::pow(o.value, n) * inst.apply_dual(OutcomeSet::of({o.value}), one);
    return hermitian_part(m);
}

}  // namespace

Op mean_noise_operator(const Povm &povm, const Observable &a) {
    return moment_operator(povm, 1) - a.op();
}

Op mean_disturbance_operator(const CpInstrument &inst, const Observable &b) {
    return inst.total_dual(b.op()) - b.op();
}

double commutator_bound(const Observable &a, const Observable &b, const DensityState &rho) {
    return 0.5 * std::abs(trace_product(commutator(a.op(), b.op()), rho.op()));
}

// ---------------------------------------------------------------------------

ErrorReport error_report(const MeasuringProcess &mp, const Observable &a, const Observable &b,
                         const DensityState &rho) {
    ErrorReport r;
    r.epsilon = rms_noise(mp, a, rho, Method::Direct);
    r.eta = rms_disturbance(mp, b, rho, Method::Direct);
    r.sigma_a = standard_deviation(a.op(), rho);
    r.sigma_b = standard_deviation(b.op(), rho);
    r.commutator_bound = commutator_bound(a, b, rho);
    r.mean_noise = mean_noise(mp, a, rho, Method::Direct);
    r.mean_disturbance = mean_disturbance(mp, b, rho, Method::Direct);
    return r;
}

ErrorReport error_report(const CpInstrument &inst, const Observable &a, const Observable &b,
                         const DensityState &rho) {
    ErrorReport r;
    r.epsilon = rms_noise(inst, a, rho);
    r.eta = rms_disturbance(inst, b, rho);
    r.sigma_a = standard_deviation(a.op(), rho);
    r.sigma_b = standard_deviation(b.op(), rho);
    r.commutator_bound = commutator_bound(a, b, rho);
    r.mean_noise = expectation(instrument_moment(inst, 1), rho) - expectation(a.op(), rho);
    r.mean_disturbance = mean_disturbance(inst, b, rho);
    return r;
}

std::string to_json(const ErrorReport &r) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << "{\"epsilon\":" << r.epsilon << ",\"eta\":" << r.eta << ",\"sigma_A\":" << r.sigma_a
       << ",\"sigma_B\":" << r.sigma_b << ",\"commutator_bound\":" << r.commutator_bound
       << ",\"mean_noise\":" << r.mean_noise << ",\"mean_disturbance\":" << r.mean_disturbance << "}";
    return os.str();
}

std::string csv_header(const ErrorReport &) {
    return "epsilon,eta,sigma_A,sigma_B,commutator_bound,mean_noise,mean_disturbance";
}

std::string to_csv_row(const ErrorReport &r) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << r.epsilon << "," << r.eta << "," << r.sigma_a << "," << r.sigma_b << "," << r.commutator_bound << ","
       << r.mean_noise << "," << r.mean_disturbance;
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

UniversalCheck universal_from(const ErrorReport &r) {
    UniversalCheck c;
    c.lhs = r.epsilon * r.eta + r.epsilon * r.sigma_b + r.sigma_a * r.eta;
    c.rhs = r.commutator_bound;
    c.holds = c.lhs >= c.rhs - kRelationSlack;
    c.report = r;
    return c;
}

HeisenbergCheck heisenberg_from(double eps, double eta, double rhs, const Op &n_a, const Op &d_b,
                                const Observable &a, const Observable &b, const DensityState &rho) {
    HeisenbergCheck c;
    c.lhs = eps * eta;
    c.rhs = rhs;
    c.holds = c.lhs >= rhs - kRelationSlack;
    const Op term = commutator(n_a, b.op()) + commutator(a.op(), d_b);
    c.condition_term = 0.5 * std::abs(trace_product(term, rho.op()));
    c.condition_holds = c.lhs + c.condition_term >= rhs - kRelationSlack;
    return c;
}

}  // namespace

UniversalCheck check_universal_relation(const MeasuringProcess &mp, const Observable &a, const Observable &b,
                                        const DensityState &rho) {
    return universal_from(error_report(mp, a, b, rho));
}

UniversalCheck check_universal_relation(const CpInstrument &inst, const Observable &a, const Observable &b,
                                        const DensityState &rho) {
    return universal_from(error_report(inst, a, b, rho));
}

HeisenbergCheck check_heisenberg_relation(const MeasuringProcess &mp, const Observable &a, const Observable &b,
                                          const DensityState &rho) {
    const double eps = rms_noise(mp, a, rho, Method::Direct);
    const double eta = rms_disturbance(mp, b, rho, Method::Direct);
    // n(A) = Tr_K[N(A)(1 (x) rho0)], d(B) = Tr_K[D(B)(1 (x) rho0)].
    const auto nd = noise_disturbance_operators(mp, a, b);
    const Op weight = kron(identity(mp.object_dim()), mp.probe_state().op());
    const Op n_a = partial_trace(nd.noise * weight, mp.object_dim(), mp.probe_dim(), Subsystem::First);
    const Op d_b = partial_trace(nd.disturbance * weight, mp.object_dim(), mp.probe_dim(), Subsystem::First);
    return heisenberg_from(eps, eta, commutator_bound(a, b, rho), n_a, d_b, a, b, rho);
}

HeisenbergCheck check_heisenberg_relation(const CpInstrument &inst, const Observable &a, const Observable &b,
                                          const DensityState &rho) {
    const double eps = rms_noise(inst, a, rho);
    const double eta = rms_disturbance(inst, b, rho);
    const Op n_a = instrument_moment(inst, 1) - a.op();
    const Op d_b = mean_disturbance_operator(inst, b);
    return heisenberg_from(eps, eta, commutator_bound(a, b, rho), n_a, d_b, a, b, rho);
}

}  // namespace qmtk
