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

#ifndef QMTK_CONSERVATION_HPP
#define QMTK_CONSERVATION_HPP

// Accuracy limits imposed by additive conservation laws: the quantitative
// Wigner-Araki-Yanase bound, the spin error-probability bound, and gate
// infidelity of rotationally invariant qubit-gate implementations.

#include <array>
#include <cstdint>
#include <span>

#include "qmtk/errdist.hpp"
#include "qmtk/models.hpp"

namespace qmtk {

struct SpinOperators {
    Op x, y, z;
};

/// Angular-momentum matrices of spin twice_j / 2 (dimension twice_j + 1),
/// basis ordered m = j, j-1, ..., -j. For twice_j = 1 these are (hbar/2) sigma.
SpinOperators spin_operators(unsigned twice_j, double hbar = 1.0);

/// U = e^{i phi} (cos(theta/2) 1 + i sin(theta/2) n.sigma) with phi in
/// [0, 2 pi), theta in [0, pi], |n| = 1.
class GateTarget {
  public:
    static GateTarget from_angles(double phi, double theta, const std::array<double, 3> &axis);
    /// Extracts (phi, theta, n) from a 2x2 unitary. For theta = 0 the axis is
    /// reported as (0, 0, 1).
    static GateTarget from_matrix(const Op &u);

    double phi() const {
        return phi_;
    }
    double theta() const {
        return theta_;
    }
    const std::array<double, 3> &axis() const {
        return axis_;
    }
    const Op &matrix() const {
        return matrix_;
    }

  private:
    double phi_ = 0.0;
    double theta_ = 0.0;
    std::array<double, 3> axis_{0.0, 0.0, 1.0};
    Op matrix_;
};

/// A pair (U, |xi>): unitary on C^2 (x) H_A and an ancilla state.
class Implementation {
  public:
    Implementation(Op unitary, Ket ancilla_state);

    std::size_t ancilla_dim() const {
        return static_cast<std::size_t>(ancilla_.size());
    }
    const Op &unitary() const {
        return unitary_;
    }
    const Ket &ancilla_state() const {
        return ancilla_;
    }

    /// Kraus operators of E(rho) = Tr_A[U (rho (x) |xi><xi|) U^dagger].
    const std::vector<Op> &channel_kraus() const {
        return kraus_;
    }
    Op channel(const Op &rho) const;

  private:
    Op unitary_;
    Ket ancilla_;
    std::vector<Op> kraus_;
};

struct WayBound {
    double value;
    bool vacuous;  // numerator and denominator both zero
};

/// |<[A, L1]>_rho|^2 / (4 sigma(L1|rho)^2 + 4 sigma(L2|rho0)^2).
WayBound way_lower_bound(const Observable &a, const Observable &l1, const Observable &l2, const DensityState &rho,
                         const DensityState &rho0);

struct WayCheck {
    double epsilon_sq;
    double bound;
    bool conserved;  // [U, L1 (x) 1 + 1 (x) L2] = 0
    bool yanase;     // [M, L2] = 0
    bool holds;      // epsilon_sq >= bound - slack; meaningful when conserved && yanase
};

WayCheck verify_way(const MeasuringProcess &mp, const Observable &a, const Observable &l1, const Observable &l2,
                    const DensityState &rho);

/// P_e = eps(S_z)^2 / hbar^2.
double yanase_error_probability(double epsilon_sq, double hbar = 1.0);
/// 1 / (4 + 16 (sigma(L2) / hbar)^2).
double yanase_bound(double sigma_l2, double hbar = 1.0);

/// Hermitian basis (Hilbert-Schmidt orthonormal) of the commutant of the
/// given operators.
std::vector<Op> commutant_hermitian_basis(std::span<const Op> generators);

/// exp(iG) with G a seeded random Hermitian element of the commutant.
Op commutant_unitary(std::span<const Op> generators, Rng &rng);

/// Random unitary on C^2 (x) C^(N+1) commuting with every component of the
/// total spin S (x) 1 + 1 (x) L, L of spin N/2.
Op covariant_unitary(unsigned ancilla_spin_n, std::uint64_t seed, double hbar = 1.0);

/// Spin-measurement model on C^2 (x) C^(N+1): covariant unitary, seeded
/// random probe state, and a meter that is a random function of the ancilla
/// J_x (so [M, L2] = 0 with L2 = ancilla J_x).
MeasuringProcess covariant_way_process(unsigned ancilla_spin_n, std::uint64_t seed, double hbar = 1.0);

struct FidelityResult {
    double fidelity;
    Ket argmin_state;
};

/// inf over pure qubit states of <psi|U_S^dagger E(|psi><psi|) U_S|psi>^(1/2):
/// 2-degree Bloch-sphere grid followed by local refinement.
FidelityResult gate_fidelity(const Implementation &impl, const GateTarget &target);

/// Certified lower bound on the CB distance: multi-start local maximization
/// of the trace distance over pure inputs on C^2 (x) C^2. The first start is
/// the fidelity minimizer, the second a maximally entangled state.
double cb_distance_lower_bound(const Implementation &impl, const GateTarget &target, std::size_t n_starts,
                               std::uint64_t seed = 0);

/// sin^2(theta)/(4 + 4N^2) for theta <= pi/2, 1/(4 + 4N^2) otherwise.
double gate_infidelity_bound(double theta, int n);

}  // namespace qmtk

#endif  // QMTK_CONSERVATION_HPP
