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

#ifndef QMTK_INSTRUMENTS_HPP
#define QMTK_INSTRUMENTS_HPP

// POVMs, instruments (Kraus form and raw superoperator form), measuring
// processes, and the constructions connecting them.

#include <memory>
#include <span>
#include <vector>

#include "qmtk/linops.hpp"

namespace qmtk {

struct PovmOutcome {
    double value;
    Op effect;
};

/// Finite POVM: positive effects indexed by distinct real values, summing to I.
class Povm {
  public:
    Povm() = default;
    explicit Povm(std::vector<PovmOutcome> outcomes, const Tolerances &tol = kDefaultTolerances);

    std::size_t dim() const {
        return dim_;
    }
    std::span<const PovmOutcome> outcomes() const {
        return outcomes_;
    }
    Op effect(const OutcomeSet &set) const;
    double probability(const OutcomeSet &set, const DensityState &rho) const;

  private:
    std::size_t dim_ = 0;
    std::vector<PovmOutcome> outcomes_;
};

struct KrausOutcome {
    double value;
    std::vector<Op> kraus;
};

/// Completely positive instrument in Kraus form. The total map is trace
/// preserving: sum over outcomes and Kraus indices of K^dagger K = I.
class CpInstrument {
  public:
    CpInstrument() = default;
    explicit CpInstrument(std::vector<KrausOutcome> outcomes, const Tolerances &tol = kDefaultTolerances);

    /// Projective (von Neumann-Lueders) instrument of an observable.
    static CpInstrument projective(const Observable &a);

    std::size_t dim() const {
        return dim_;
    }
    std::span<const KrausOutcome> outcomes() const {
        return outcomes_;
    }
    std::size_t kraus_count() const;

    /// I(set) x for an arbitrary (not necessarily Hermitian) operator x.
    Op apply(const OutcomeSet &set, const Op &x) const;
    /// Dual map I(set)^* x.
    Op apply_dual(const OutcomeSet &set, const Op &x) const;
    /// Total operation T = I(R).
    Op total(const Op &x) const {
        return apply(OutcomeSet::all(), x);
    }
    Op total_dual(const Op &x) const {
        return apply_dual(OutcomeSet::all(), x);
    }

    /// Column-stacking superoperator of outcome k (dim^2 x dim^2).
    Op superoperator(std::size_t k) const;

  private:
    Op sandwich(std::size_t outcome, std::size_t j, const Op &x, bool dual) const;

    std::size_t dim_ = 0;
    std::vector<KrausOutcome> outcomes_;
    // Sparse copies of large, sparse Kraus operators (grid models).
    struct SparseCache;
    std::shared_ptr<const SparseCache> sparse_;
};

struct SuperopOutcome {
    double value;
    Op superop;  // dim^2 x dim^2, column-stacking convention
};

/// Davies-Lewis instrument: outcome-indexed linear maps with a trace
/// preserving total. Positivity is not assumed.
class DlInstrument {
  public:
    DlInstrument() = default;
    DlInstrument(std::size_t dim, std::vector<SuperopOutcome> outcomes, const Tolerances &tol = kDefaultTolerances);

    static DlInstrument from_cp(const CpInstrument &inst);

    std::size_t dim() const {
        return dim_;
    }
    std::span<const SuperopOutcome> outcomes() const {
        return outcomes_;
    }
    Op apply(const OutcomeSet &set, const Op &x) const;
    Op apply_dual(const OutcomeSet &set, const Op &x) const;

  private:
    std::size_t dim_ = 0;
    std::vector<SuperopOutcome> outcomes_;
};

/// Quadruple (K, rho0, U, M): probe space dimension, probe state, unitary on
/// H (x) K, and meter observable on K.
class MeasuringProcess {
  public:
    MeasuringProcess() = default;
    MeasuringProcess(std::size_t object_dim, DensityState probe_state, Op unitary, Observable meter,
                     const Tolerances &tol = kDefaultTolerances);

    std::size_t object_dim() const {
        return object_dim_;
    }
    std::size_t probe_dim() const {
        return probe_state_.dim();
    }
    const DensityState &probe_state() const {
        return probe_state_;
    }
    const Op &unitary() const {
        return unitary_;
    }
    const Observable &meter() const {
        return meter_;
    }

  private:
    std::size_t object_dim_ = 0;
    DensityState probe_state_;
    Op unitary_;
    Observable meter_;
};

// ---------------------------------------------------------------------------

/// Tr[E^A(set) rho].
double born_probability(const Observable &a, const OutcomeSet &set, const DensityState &rho);

struct InstrumentResult {
    double prob;
    Op unnormalized;  // I(set) rho
};

InstrumentResult apply_instrument(const CpInstrument &inst, const OutcomeSet &set, const DensityState &rho);
InstrumentResult apply_instrument(const DlInstrument &inst, const OutcomeSet &set, const DensityState &rho);

/// Effects I({x})^*(1).
Povm povm_of_instrument(const CpInstrument &inst);
Povm povm_of_instrument(const DlInstrument &inst);

struct Posterior {
    double value;
    double prob;
    DensityState state;
};

struct PosteriorFamily {
    std::vector<Posterior> posteriors;
    bool all_below_threshold = false;
};

/// Posterior states I({x})rho / Tr[I({x})rho] for every x with probability
/// above tol.prob.
PosteriorFamily posterior_states(const CpInstrument &inst, const DensityState &rho,
                                 const Tolerances &tol = kDefaultTolerances);

/// Instrument realized by a measuring process, in minimal Kraus form.
CpInstrument instrument_of_process(const MeasuringProcess &mp);

/// Pure measuring process realizing a CP instrument (Stinespring-type
/// dilation). Probe dimension equals the total Kraus count.
MeasuringProcess process_of_instrument(const CpInstrument &inst);

/// Normalized Choi matrix (1/d) sum_ij |i><j| (x) Phi(|i><j|).
Op choi_matrix(const Op &superop, std::size_t dim);

struct CpCheck {
    bool completely_positive;
    double min_choi_eigenvalue;
};

CpCheck is_completely_positive(const DlInstrument &inst, const Tolerances &tol = kDefaultTolerances);

/// Instrument I(set) rho = sum_{n in set} T(E^A({n}) rho E^A({n})) with T the
/// transpose in the computational basis. Trace preserving and positive on
/// states, but not completely positive whenever some eigenvalue of A is
/// degenerate.
DlInstrument transpose_composed_instrument(const Observable &a);

/// (I(set) (x) id)(x) for x on H (x) C^ancilla_dim.
Op extend_with_identity(const DlInstrument &inst, const OutcomeSet &set, const Op &x, std::size_t ancilla_dim);

/// exp(-i H t / hbar).
Op evolution_unitary(const Op &hamiltonian, double t, double hbar = 1.0);

/// Joint probability Tr[I_n(D_n) a_n ... I_1(D_1) a_1 rho] where a_k is
/// conjugation by evolutions[k], applied before measurement k.
double sequential_joint_distribution(std::span<const CpInstrument> insts, std::span<const Op> evolutions,
                                     const DensityState &rho, std::span<const OutcomeSet> sets);

/// Same, with the evolution between measurements generated by Hamiltonians
/// over the intervals t_k - t_{k-1} (t_0 = 0).
double sequential_joint_distribution(std::span<const CpInstrument> insts, std::span<const Op> hamiltonians,
                                     std::span<const double> times, const DensityState &rho,
                                     std::span<const OutcomeSet> sets, double hbar = 1.0);

/// Frobenius distance between the superoperators of two instruments, summed
/// over outcomes matched by value. Outcomes present in only one instrument
/// contribute their full norm.
double superoperator_distance(const CpInstrument &a, const CpInstrument &b);

}  // namespace qmtk

#endif  // QMTK_INSTRUMENTS_HPP
