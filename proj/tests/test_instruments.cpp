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

#include "oracles.hpp"
#include "qmtk/instruments.hpp"
#include "qmtk/models.hpp"

using namespace qmtk;

namespace {

double max_abs(const Op &x) {
    return x.cwiseAbs().maxCoeff();
}

// I({x}) rho = Tr_K[(1 (x) P_x) U (rho (x) rho0) U^dagger].
Op process_outcome_oracle(const MeasuringProcess &mp, const SpectralComponent &c, const Op &rho) {
    const auto d = static_cast<Eigen::Index>(mp.object_dim()), m = static_cast<Eigen::Index>(mp.probe_dim());
    const Op big = mp.unitary() * oracle::kron(rho, mp.probe_state().op()) * mp.unitary().adjoint();
    return oracle::trace_out_second(oracle::kron(Op::Identity(d, d), c.projection()) * big, d, m);
}

}  // namespace

TEST(Povm, RejectsInvalidEffects) {
    Op half = Op::Identity(2, 2) / 2.0;
    EXPECT_NO_THROW(Povm({{1.0, half}, {-1.0, half}}));
    EXPECT_THROW(Povm({{1.0, half}}), InvalidOperatorError);
    Op neg = Op::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = 1.0;
    Op rest = Op::Identity(2, 2) - neg;
    EXPECT_THROW(Povm({{1.0, neg}, {0.0, rest}}), InvalidOperatorError);
    EXPECT_THROW(Povm({{1.0, half}, {1.0, half}}), InvalidOperatorError);
}

TEST(Povm, ProjectiveInstrumentGivesSpectralMeasure) {
    Rng rng(2);
    const Observable a = random_observable(3, rng);
    const Povm p = povm_of_instrument(CpInstrument::projective(a));
    ASSERT_EQ(p.outcomes().size(), a.spectrum().size());
    for (std::size_t k = 0; k < a.spectrum().size(); ++k) {
        EXPECT_NEAR(p.outcomes()[k].value, a.spectrum()[k].value, 1e-12);
        EXPECT_LT(max_abs(p.outcomes()[k].effect - a.spectrum()[k].projection()), 1e-12);
    }
}

TEST(Instrument, BornRuleAndLuedersPosterior) {
    const Observable z = Observable::from_hermitian(oracle::pauli('z'));
    Ket plus = Ket::Constant(2, 1.0 / std::sqrt(2.0));
    const DensityState rho = DensityState::pure(plus);
    EXPECT_NEAR(born_probability(z, OutcomeSet::of({1.0}), rho), 0.5, 1e-14);
    const auto fam = posterior_states(CpInstrument::projective(z), rho);
    ASSERT_EQ(fam.posteriors.size(), 2u);
    for (const auto &p : fam.posteriors) {
        EXPECT_NEAR(p.prob, 0.5, 1e-14);
        EXPECT_LT(max_abs(p.state.op() - z.spectral_projection(OutcomeSet::of({p.value}))), 1e-13);
    }
}

TEST(Instrument, PosteriorsDropNegligibleOutcomes) {
    const Observable z = Observable::from_hermitian(oracle::pauli('z'));
    Ket up = Ket::Zero(2);
    up(0) = 1.0;
    const auto fam = posterior_states(CpInstrument::projective(z), DensityState::pure(up));
    ASSERT_EQ(fam.posteriors.size(), 1u);
    EXPECT_NEAR(fam.posteriors[0].value, 1.0, 1e-15);
}

TEST(Instrument, ProbabilitiesSumToOneAndMixingLaw) {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const CpInstrument inst = random_cp_instrument(3, 3, 2, rng);
        const DensityState r1 = random_density(3, 1, rng), r2 = random_density(3, 3, rng);
        double s = 0.0;
        for (const auto &o : inst.outcomes()) s += apply_instrument(inst, OutcomeSet::of({o.value}), r1).prob;
        EXPECT_NEAR(s, 1.0, 1e-12);
        const double lam = 0.3;
        const DensityState mix(lam * r1.op() + (1 - lam) * r2.op());
        const OutcomeSet set = OutcomeSet::of({inst.outcomes()[0].value});
        EXPECT_LT(max_abs(inst.apply(set, mix.op()) - (lam * inst.apply(set, r1.op()) +
                                                        (1 - lam) * inst.apply(set, r2.op()))),
                  1e-13);
    }
}

TEST(Instrument, DualMapIsAdjoint) {
    Rng rng(6);
    const CpInstrument inst = random_cp_instrument(3, 2, 2, rng);
    const Op x = random_gaussian_matrix(3, 3, rng), y = random_gaussian_matrix(3, 3, rng);
    const OutcomeSet set = OutcomeSet::of({inst.outcomes()[1].value});
    EXPECT_NEAR(std::abs((y.adjoint() * inst.apply(set, x)).trace() - (inst.apply_dual(set, y).adjoint() * x).trace()),
                0.0, 1e-12);
    EXPECT_LT(max_abs(inst.total_dual(Op::Identity(3, 3)) - Op::Identity(3, 3)), 1e-12);
}

TEST(Instrument, RejectsNonTracePreservingKraus) {
    Op k = Op::Identity(2, 2) * 0.9;
    EXPECT_THROW(CpInstrument({{0.0, {k}}}), InvalidOperatorError);
}

TEST(Process, InstrumentMatchesPartialTraceOracle) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const MeasuringProcess mp = random_measuring_process(2 + seed % 2, 2 + seed % 3, seed);
        const CpInstrument inst = instrument_of_process(mp);
        Rng rng(seed + 100);
        const DensityState rho = random_density(mp.object_dim(), 2, rng);
        for (const auto &c : mp.meter().spectrum()) {
            const Op expected = process_outcome_oracle(mp, c, rho.op());
            EXPECT_LT(max_abs(inst.apply(OutcomeSet::of({c.value}), rho.op()) - expected), 1e-12);
        }
    }
}

TEST(Process, RejectsNonUnitaryAndShapeMismatch) {
    const Observable m = Observable::from_hermitian(oracle::pauli('z'));
    Op u = Op::Identity(4, 4);
    u(0, 0) = 2.0;
    EXPECT_THROW(MeasuringProcess(2, DensityState::maximally_mixed(2), u, m), InvalidOperatorError);
    EXPECT_THROW(MeasuringProcess(3, DensityState::maximally_mixed(2), Op::Identity(4, 4), m), ShapeError);
}

TEST(Process, RealizationRoundtrip) {
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        const CpInstrument inst = random_cp_instrument(2 + t % 3, 2 + t % 2, 1 + t % 3, rng);
        const MeasuringProcess mp = process_of_instrument(inst);
        EXPECT_TRUE(is_unitary(mp.unitary()));
        EXPECT_LT(superoperator_distance(inst, instrument_of_process(mp)), 1e-9);
    }
}

TEST(Process, SuperoperatorDistanceDetectsDifferences) {
    Rng rng(10);
    const CpInstrument a = random_cp_instrument(2, 2, 1, rng), b = random_cp_instrument(2, 2, 1, rng);
    EXPECT_NEAR(superoperator_distance(a, a), 0.0, 1e-14);
    EXPECT_GT(superoperator_distance(a, b), 1e-3);
}

TEST(CompletePositivity, TransposeOnDegenerateObservableIsNotCp) {
    // A = 1 on a qubit: the single outcome map is the transpose.
    const DlInstrument t = transpose_composed_instrument(Observable::from_hermitian(Op::Identity(2, 2)));
    const CpCheck chk = is_completely_positive(t);
    EXPECT_FALSE(chk.completely_positive);
    // Oracle: the unnormalized Choi matrix of the transpose is the swap, with
    // minimum eigenvalue -1; normalized by 1/d = 1/2.
    const Op choi = oracle::choi([](const Op &x) { return Op(x.transpose()); }, 2);
    EXPECT_NEAR(oracle::min_eigenvalue(choi) / 2.0, -0.5, 1e-14);
    EXPECT_NEAR(chk.min_choi_eigenvalue, -0.5, 1e-12);
}

TEST(CompletePositivity, TransposeIsPositiveOnStates) {
    Rng rng(12);
    const DlInstrument t = transpose_composed_instrument(Observable::from_hermitian(Op::Identity(2, 2)));
    for (int k = 0; k < 10; ++k) {
        const DensityState rho = random_density(2, 1 + k % 2, rng);
        EXPECT_GE(oracle::min_eigenvalue(t.apply(OutcomeSet::all(), rho.op())), -1e-12);
    }
    // Extended by the identity it maps the maximally entangled state to the
    // (scaled) swap, which has a negative eigenvalue.
    Ket phi = Ket::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const Op out = extend_with_identity(t, OutcomeSet::all(), projector(phi), 2);
    EXPECT_NEAR(oracle::min_eigenvalue(out), -0.5, 1e-12);
}

TEST(CompletePositivity, NondegenerateTransposeComposedIsCp) {
    Rng rng(14);
    const CpCheck chk = is_completely_positive(transpose_composed_instrument(random_observable(3, rng)));
    EXPECT_TRUE(chk.completely_positive);
}

TEST(CompletePositivity, KrausInstrumentsPass) {
    Rng rng(16);
    for (int t = 0; t < 30; ++t) {
        const CpCheck chk = is_completely_positive(DlInstrument::from_cp(random_cp_instrument(2 + t % 3, 2, 2, rng)));
        EXPECT_TRUE(chk.completely_positive);
        EXPECT_GE(chk.min_choi_eigenvalue, -1e-12);
    }
}

TEST(CompletePositivity, ChoiMatrixMatchesOracle) {
    Rng rng(18);
    const CpInstrument inst = random_cp_instrument(2, 1, 3, rng);
    const Op expected = oracle::choi([&](const Op &x) { return inst.apply(OutcomeSet::all(), x); }, 2) / 2.0;
    EXPECT_LT(max_abs(choi_matrix(inst.superoperator(0), 2) - expected), 1e-13);
}

TEST(DlInstrument, RejectsNonTracePreserving) {
    Op s = Op::Identity(4, 4) * 0.5;
    EXPECT_THROW(DlInstrument(2, {{0.0, s}}), InvalidOperatorError);
}

TEST(Wigner, ProjectiveChainMatchesProductFormula) {
    Rng rng(20);
    for (int t = 0; t < 20; ++t) {
        const Observable a = random_observable(3, rng), b = random_observable(3, rng);
        const Op u1 = random_unitary(3, rng), u2 = random_unitary(3, rng);
        const DensityState rho = random_density(3, 2, rng);
        const std::vector<CpInstrument> insts{CpInstrument::projective(a), CpInstrument::projective(b)};
        const std::vector<Op> evol{u1, u2};
        const double x = a.spectrum()[0].value, y = b.spectrum()[1].value;
        const std::vector<OutcomeSet> sets{OutcomeSet::of({x}), OutcomeSet::of({y})};
        const Op p = a.spectrum()[0].projection(), q = b.spectrum()[1].projection();
        // Wigner: Tr[Q U2 P U1 rho U1^dagger P U2^dagger Q]
        const Op w = q * u2 * p * u1 * rho.op() * u1.adjoint() * p * u2.adjoint() * q;
        EXPECT_NEAR(sequential_joint_distribution(insts, evol, rho, sets), w.trace().real(), 1e-12);
    }
}

TEST(Wigner, HamiltonianOverloadMatchesUnitaries) {
    Rng rng(22);
    const CpInstrument i1 = random_cp_instrument(2, 2, 1, rng), i2 = random_cp_instrument(2, 2, 2, rng);
    const Op h1 = random_hermitian(2, rng), h2 = random_hermitian(2, rng);
    const std::vector<double> times{0.4, 1.1};
    const std::vector<Op> evol{evolution_unitary(h1, 0.4, 2.0), evolution_unitary(h2, 0.7, 2.0)};
    const DensityState rho = random_density(2, 2, rng);
    const std::vector<CpInstrument> insts{i1, i2};
    const std::vector<Op> hams{h1, h2};
    const std::vector<OutcomeSet> sets{OutcomeSet::of({i1.outcomes()[0].value}), OutcomeSet::all()};
    EXPECT_NEAR(sequential_joint_distribution(insts, hams, times, rho, sets, 2.0),
                sequential_joint_distribution(insts, evol, rho, sets), 1e-13);
}

TEST(Wigner, NonUnitaryEvolutionRejected) {
    const std::vector<CpInstrument> insts{CpInstrument::projective(Observable::from_hermitian(oracle::pauli('z')))};
    const std::vector<Op> evol{Op::Identity(2, 2) * 2.0};
    const std::vector<OutcomeSet> sets{OutcomeSet::all()};
    EXPECT_THROW(sequential_joint_distribution(insts, evol, DensityState::maximally_mixed(2), sets),
                 InvalidOperatorError);
}
