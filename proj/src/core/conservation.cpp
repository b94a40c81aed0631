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

#include "qmtk/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qmtk {

namespace {

constexpr double kPi = std::numbers::pi;

Op pauli(int k) {
    Op s = Op::Zero(2, 2);
    const Complex i(0.0, 1.0);
    switch (k) {
    case 0:
        s(0, 1) = 1.0;
        s(1, 0) = 1.0;
        break;
    case 1:
        s(0, 1) = -i;
        s(1, 0) = i;
        break;
    default:
        s(0, 0) = 1.0;
        s(1, 1) = -1.0;
        break;
    }
    return s;
}

Ket bloch_state(double a, double b) {
    Ket psi(2);
    psi(0) = std::cos(a / 2.0);
    psi(1) = std::polar(std::sin(a / 2.0), b);
    return psi;
}

// Pattern search minimizing f over a real parameter vector.
template <class F>
double pattern_minimize(F &&f, std::vector<double> &x, double step, double min_step, int max_evals) {
    double best = f(x);
    int evals = 1;
    while (step > min_step && evals < max_evals) {
        bool improved = false;
        for (std::size_t k = 0; k < x.size(); ++k) {
            for (double dir : {1.0, -1.0}) {
                const double saved = x[k];
                x[k] = saved + dir * step;
                const double v = f(x);
                ++evals;
                if (v < best) {
                    best = v;
                    improved = true;
                    break;
                }
                x[k] = saved;
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

Ket params_to_state(const std::vector<double> &p) {
    Ket psi(static_cast<Eigen::Index>(p.size() / 2));
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = Complex(p[2 * i], p[2 * i + 1]);
    const double n = psi.norm();
    if (n == 0.0) {
        psi.setZero();
        psi(0) = 1.0;
        return psi;
    }
    return psi / n;
}

std::vector<double> state_to_params(const Ket &psi) {
    std::vector<double> p(static_cast<std::size_t>(2 * psi.size()));
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        p[2 * i] = psi(i).real();
        p[2 * i + 1] = psi(i).imag();
    }
    return p;
}

}  // namespace

SpinOperators spin_operators(unsigned twice_j, double hbar) {
    const std::size_t d = twice_j + 1;
    const double j = twice_j / 2.0;
    Op jz = Op::Zero(d, d), jp = Op::Zero(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double m = j - static_cast<double>(k);
        jz(k, k) = hbar * m;
        // J+ |m> = hbar sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits at index k-1.
        if (k > 0) jp(k - 1, k) = hbar * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    const Op jm = jp.adjoint();
    SpinOperators s;
    s.x = (jp + jm) / 2.0;
    s.y = (jp - jm) / Complex(0.0, 2.0);
    s.z = jz;
    return s;
}

GateTarget GateTarget::from_angles(double phi, double theta, const std::array<double, 3> &axis) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("GateTarget: theta must lie in [0, pi]");
    const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("GateTarget: axis must be a nonzero finite vector");
    GateTarget g;
    g.phi_ = std::fmod(phi, 2.0 * kPi);
    if (g.phi_ < 0.0) g.phi_ += 2.0 * kPi;
    g.theta_ = theta;
    g.axis_ = {axis[0] / n, axis[1] / n, axis[2] / n};
    Op ns = g.axis_[0] * pauli(0) + g.axis_[1] * pauli(1) + g.axis_[2] * pauli(2);
    g.matrix_ = std::polar(1.0, g.phi_) *
                (std::cos(theta / 2.0) * identity(2) + Complex(0.0, std::sin(theta / 2.0)) * ns);
    return g;
}

GateTarget GateTarget::from_matrix(const Op &u) {
    require_square(u, "GateTarget");
    if (u.rows() != 2) throw ShapeError("GateTarget: expected a 2x2 matrix");
    if (!is_unitary(u)) throw InvalidOperatorError("GateTarget: matrix is not unitary");
    double phi = std::arg(u.determinant()) / 2.0;
    Op v = std::polar(1.0, -phi) * u;
    double c = (v.trace() / 2.0).real();
    if (c < 0.0) {
        phi += kPi;
        v = -v;
        c = -c;
    }
    std::array<double, 3> n{0.0, 0.0, 0.0};
    double s2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        // tr(V sigma_k) = 2 i sin(theta/2) n_k
        n[k] = ((v * pauli(k)).trace() / Complex(0.0, 2.0)).real();
        s2 += n[k] * n[k];
    }
    const double s = std::sqrt(s2);
    const double theta = 2.0 * std::atan2(s, c);
    if (s < 1e-15) n = {0.0, 0.0, 1.0};
    return from_angles(phi, theta, n);
}

Implementation::Implementation(Op unitary, Ket ancilla_state)
    : unitary_(std::move(unitary)), ancilla_(std::move(ancilla_state)) {
    require_square(unitary_, "Implementation");
    const Eigen::Index da = ancilla_.size();
    if (da < 1 || unitary_.rows() != 2 * da) throw ShapeError("Implementation: unitary must act on C^2 (x) ancilla");
    if (!is_unitary(unitary_)) throw InvalidOperatorError("Implementation: operator is not unitary");
    if (std::abs(ancilla_.squaredNorm() - 1.0) > kDefaultTolerances.trace)
        throw InvalidStateError("Implementation: ancilla state is not normalized");
    // K_k(a, b) = sum_c <a, k| U |b, c> xi_c
    kraus_.assign(static_cast<std::size_t>(da), Op::Zero(2, 2));
    for (Eigen::Index k = 0; k < da; ++k)
        for (Eigen::Index a = 0; a < 2; ++a)
            for (Eigen::Index b = 0; b < 2; ++b) {
                Complex acc = 0.0;
                for (Eigen::Index c = 0; c < da; ++c) acc += unitary_(a * da + k, b * da + c) * ancilla_(c);
                kraus_[static_cast<std::size_t>(k)](a, b) = acc;
            }
}

Op Implementation::channel(const Op &rho) const {
    if (rho.rows() != 2 || rho.cols() != 2) throw ShapeError("Implementation::channel: expected a qubit operator");
    Op out = Op::Zero(2, 2);
    for (const auto &k : kraus_) out += k * rho * k.adjoint();
    return out;
}

WayBound way_lower_bound(const Observable &a, const Observable &l1, const Observable &l2, const DensityState &rho,
                         const DensityState &rho0) {
    require_same_dim(a.op(), l1.op(), "way_lower_bound");
    require_same_dim(a.op(), rho.op(), "way_lower_bound");
    require_same_dim(l2.op(), rho0.op(), "way_lower_bound");
    const double num = std::norm(trace_product(commutator(a.op(), l1.op()), rho.op()));
    const double s1 = standard_deviation(l1.op(), rho);
    const double s2 = standard_deviation(l2.op(), rho0);
    const double den = 4.0 * s1 * s1 + 4.0 * s2 * s2;
    if (den == 0.0) {
        if (num == 0.0) return {0.0, true};
        return {std::numeric_limits<double>::infinity(), false};
    }
    return {num / den, false};
}

WayCheck verify_way(const MeasuringProcess &mp, const Observable &a, const Observable &l1, const Observable &l2,
                    const DensityState &rho) {
    if (l1.dim() != mp.object_dim() || l2.dim() != mp.probe_dim())
        throw ShapeError("verify_way: conserved quantities do not match the process");
    const std::size_t d = mp.object_dim(), m = mp.probe_dim();
    const Op total = kron(l1.op(), identity(m)) + kron(identity(d), l2.op());
    WayCheck w{};
    w.conserved = commutator(mp.unitary(), total).cwiseAbs().maxCoeff() <= kDefaultTolerances.herm;
    w.yanase = commutator(mp.meter().op(), l2.op()).cwiseAbs().maxCoeff() <= kDefaultTolerances.herm;
    const double eps = rms_noise(mp, a, rho, Method::Direct);
    w.epsilon_sq = eps * eps;
    w.bound = way_lower_bound(a, l1, l2, rho, mp.probe_state()).value;
    w.holds = w.epsilon_sq >= w.bound - kRelationSlack;
    return w;
}

double yanase_error_probability(double epsilon_sq, double hbar) {
    if (epsilon_sq < 0.0 || !(hbar > 0.0)) throw DomainError("yanase_error_probability: invalid input");
    return epsilon_sq / (hbar * hbar);
}

double yanase_bound(double sigma_l2, double hbar) {
    if (sigma_l2 < 0.0 || !(hbar > 0.0)) throw DomainError("yanase_bound: invalid input");
    const double r = sigma_l2 / hbar;
    return 1.0 / (4.0 + 16.0 * r * r);
}

std::vector<Op> commutant_hermitian_basis(std::span<const Op> generators) {
    if (generators.empty()) throw UsageError("commutant_hermitian_basis: no generators");
    const std::size_t d = static_cast<std::size_t>(generators[0].rows());
    const std::size_t d2 = d * d;
    Op stacked(static_cast<Eigen::Index>(generators.size() * d2), static_cast<Eigen::Index>(d2));
    for (std::size_t g = 0; g < generators.size(); ++g) {
        require_square(generators[g], "commutant_hermitian_basis");
        if (static_cast<std::size_t>(generators[g].rows()) != d)
            throw ShapeError("commutant_hermitian_basis: generator dimensions differ");
        // vec(XJ - JX) = (J^T (x) 1 - 1 (x) J) vec X
        stacked.middleRows(static_cast<Eigen::Index>(g * d2), static_cast<Eigen::Index>(d2)) =
            kron(Op(generators[g].transpose()), identity(d)) - kron(identity(d), generators[g]);
    }
    const Op null = null_basis(stacked, 1e-9);
    std::vector<Op> basis;
    auto add = [&](Op h) {
        for (const auto &b : basis) h -= trace_product(b, h).real() * b;
        const double n = h.norm();
        if (n > 1e-8) basis.push_back(h / n);
    };
    for (Eigen::Index c = 0; c < null.cols(); ++c) {
        const Op x = unvec(null.col(c), d);
        add(x + x.adjoint());
        add(Complex(0.0, 1.0) * (x - x.adjoint()));
    }
    return basis;
}

Op commutant_unitary(std::span<const Op> generators, Rng &rng) {
    const auto basis = commutant_hermitian_basis(generators);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::Index d = generators[0].rows();
    Op g = Op::Zero(d, d);
    for (const auto &b : basis) g += (kPi * gauss(rng)) * b;
    return exp_i_hermitian(hermitian_part(g));
}

Op covariant_unitary(unsigned ancilla_spin_n, std::uint64_t seed, double hbar) {
    const auto s = spin_operators(1, hbar);
    const auto l = spin_operators(ancilla_spin_n, hbar);
    const std::size_t da = ancilla_spin_n + 1;
    const std::vector<Op> total = {kron(s.x, identity(da)) + kron(identity(2), l.x),
                                   kron(s.y, identity(da)) + kron(identity(2), l.y),
                                   kron(s.z, identity(da)) + kron(identity(2), l.z)};
    Rng rng(seed);
    return commutant_unitary(total, rng);
}

MeasuringProcess covariant_way_process(unsigned ancilla_spin_n, std::uint64_t seed, double hbar) {
    const std::size_t da = ancilla_spin_n + 1;
    const Op u = covariant_unitary(ancilla_spin_n, seed, hbar);
    Rng rng(trial_seed(seed, 0x9e37u));
    const Ket xi = random_pure_state(da, rng);
    const Observable lx = Observable::from_hermitian(spin_operators(ancilla_spin_n, hbar).x);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    std::vector<std::pair<double, Op>> comps;
    for (const auto &c : lx.spectrum()) {
        double v = 0.0;
        bool distinct = false;
        while (!distinct) {
            v = uni(rng);
            distinct = std::all_of(comps.begin(), comps.end(),
                                   [&](const auto &p) { return std::abs(p.first - v) > 1e-3; });
        }
        comps.emplace_back(v, c.projection());
    }
    std::sort(comps.begin(), comps.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    return MeasuringProcess(2, DensityState::pure(xi), u, Observable::from_spectrum(comps));
}

FidelityResult gate_fidelity(const Implementation &impl, const GateTarget &target) {
    const auto &kraus = impl.channel_kraus();
    const Op &u = target.matrix();
    // <psi|U^dagger E(psi) U|psi> = sum_k |<U psi| K_k |psi>|^2
    auto f2 = [&](const Ket &psi) {
        const Ket phi = u * psi;
        double acc = 0.0;
        for (const auto &k : kraus) acc += std::norm(phi.dot(k * psi));
        return acc;
    };

    constexpr double deg = kPi / 180.0;
    struct Seed {
        double value, a, b;
    };
    std::vector<Seed> seeds;
    for (int ia = 0; ia <= 90; ++ia) {
        const double a = 2.0 * ia * deg;
        const int nb = (ia == 0 || ia == 90) ? 1 : 180;
        for (int ib = 0; ib < nb; ++ib) {
            const double b = 2.0 * ib * deg;
            seeds.push_back({f2(bloch_state(a, b)), a, b});
        }
    }
    const std::size_t keep = std::min<std::size_t>(4, seeds.size());
    std::partial_sort(seeds.begin(), seeds.begin() + static_cast<long>(keep), seeds.end(),
                      [](const Seed &x, const Seed &y) { return x.value < y.value; });

    double best = std::numeric_limits<double>::infinity();
    Ket best_state;
    for (std::size_t s = 0; s < keep; ++s) {
        std::vector<double> x = {seeds[s].a, seeds[s].b};
        auto obj = [&](const std::vector<double> &p) { return f2(bloch_state(p[0], p[1])); };
        const double v = pattern_minimize(obj, x, 2.0 * deg, 1e-10, 20000);
        if (v < best) {
            best = v;
            best_state = bloch_state(x[0], x[1]);
        }
    }
    return {std::sqrt(std::clamp(best, 0.0, 1.0)), best_state};
}

double cb_distance_lower_bound(const Implementation &impl, const GateTarget &target, std::size_t n_starts,
                               std::uint64_t seed) {
    if (n_starts == 0) throw DomainError("cb_distance_lower_bound: n_starts must be positive");
    std::vector<Op> kraus;
    for (const auto &k : impl.channel_kraus()) kraus.push_back(kron(k, identity(2)));
    const Op ut = kron(target.matrix(), identity(2));
    auto distance = [&](const Ket &psi) {
        Op out = Op::Zero(4, 4);
        for (const auto &k : kraus) {
            const Ket v = k * psi;
            out += v * v.adjoint();
        }
        const Ket t = ut * psi;
        out -= t * t.adjoint();
        return 0.5 * Eigen::SelfAdjointEigenSolver<Op>(hermitian_part(out)).eigenvalues().cwiseAbs().sum();
    };

    Rng rng(seed);
    double best = 0.0;
    for (std::size_t s = 0; s < n_starts; ++s) {
        Ket start;
        if (s == 0) {
            Ket zero = Ket::Zero(2);
            zero(0) = 1.0;
            start = kron(gate_fidelity(impl, target).argmin_state, zero);
        } else if (s == 1) {
            start = Ket::Zero(4);
            start(0) = start(3) = 1.0 / std::sqrt(2.0);
        } else {
            start = random_pure_state(4, rng);
        }
        std::vector<double> p = state_to_params(start);
        auto obj = [&](const std::vector<double> &q) { return -distance(params_to_state(q)); };
        const double v = -pattern_minimize(obj, p, 0.1, 1e-7, 40000);
        best = std::max(best, v);
    }
    return std::min(best, 1.0);
}

double gate_infidelity_bound(double theta, int n) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("gate_infidelity_bound: theta must lie in [0, pi]");
    if (n < 0) throw DomainError("gate_infidelity_bound: N must be non-negative");
    const double den = 4.0 + 4.0 * static_cast<double>(n) * static_cast<double>(n);
    if (theta <= kPi / 2.0) {
        const double s = std::sin(theta);
        return s * s / den;
    }
    return 1.0 / den;
}

}  // namespace qmtk
