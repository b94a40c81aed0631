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
#include "qmtk/models.hpp"
#include "qmtk/qlogic.hpp"

using namespace qmtk;

namespace {

double max_abs(const Op &x) {
    return x.cwiseAbs().maxCoeff();
}

Projection ray(const Ket &v) {
    return Projection(projector(v.normalized()));
}

Projection diag_projection(std::initializer_list<int> bits) {
    Op p = Op::Zero(static_cast<Eigen::Index>(bits.size()), static_cast<Eigen::Index>(bits.size()));
    Eigen::Index i = 0;
    for (int b : bits) p(i, i) = b, ++i;
    return Projection(p);
}

Observable obs(const Op &h) {
    return Observable::from_hermitian(h);
}

DensityState singlet() {
    Ket s = Ket::Zero(4);
    s(1) = 1.0 / std::sqrt(2.0);
    s(2) = -1.0 / std::sqrt(2.0);
    return DensityState::pure(s);
}

Projection random_proj(std::size_t d, std::size_t r, Rng &rng) {
    return Projection(random_projection(d, r, rng));
}

// Commuting pair sharing a 2-dim block on e0,e1 only through e2:
// A = sigma_z (+) 0, B = sigma_x (+) 0.
Observable block(char which) {
    Op h = Op::Zero(3, 3);
    h.topLeftCorner(2, 2) = oracle::pauli(which);
    return obs(h);
}

}  // namespace

TEST(Lattice, QubitExamples) {
    Ket zero = Ket::Unit(2, 0), plus(2);
    plus << 1.0, 1.0;
    const Projection p = ray(zero), q = ray(plus);
    EXPECT_EQ(meet(p, q).rank(), 0u);
    EXPECT_EQ(join(p, q).rank(), 2u);
    EXPECT_LT(max_abs(complement(p).op() - projector(Ket::Unit(2, 1))), 1e-12);
    // p => q = p^perp when p and q meet trivially.
    EXPECT_LT(max_abs(sasaki(p, q).op() - complement(p).op()), 1e-10);
    EXPECT_LT(max_abs(sasaki(p, p).op() - identity(2)), 1e-10);
    EXPECT_THROW(Projection(0.5 * identity(2)), InvalidOperatorError);
}

TEST(Lattice, OverlappingPlanes) {
    const Projection p = diag_projection({1, 1, 0}), q = diag_projection({0, 1, 1});
    const LatticeOps ops = lattice_ops(p, q);
    EXPECT_LT(max_abs(ops.meet.op() - diag_projection({0, 1, 0}).op()), 1e-10);
    EXPECT_LT(max_abs(ops.join.op() - identity(3)), 1e-10);
    EXPECT_LT(max_abs(ops.complement.op() - diag_projection({0, 0, 1}).op()), 1e-10);
    // p^perp v (p ^ q) = e2 + e1.
    EXPECT_LT(max_abs(ops.sasaki.op() - diag_projection({0, 1, 1}).op()), 1e-10);
}

TEST(Lattice, CommutingMeetIsProduct) {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const Op u = random_unitary(5, rng);
        Op da = Op::Zero(5, 5), db = Op::Zero(5, 5);
        for (int i = 0; i < 5; ++i) {
            da(i, i) = static_cast<double>(rng() % 2);
            db(i, i) = static_cast<double>(rng() % 2);
        }
        const Projection p(u * da * u.adjoint()), q(u * db * u.adjoint());
        EXPECT_LT(max_abs(meet(p, q).op() - p.op() * q.op()), 1e-9);
        EXPECT_LT(max_abs(join(p, q).op() - (p.op() + q.op() - p.op() * q.op())), 1e-9);
    }
}

TEST(Lattice, OrthocomplementedAndOrthomodular) {
    Rng rng(4);
    for (int t = 0; t < 30; ++t) {
        const std::size_t d = 3 + t % 3;
        const Projection p = random_proj(d, 1 + t % 2, rng), q = random_proj(d, 1 + (t / 2) % 2, rng);
        EXPECT_LT(max_abs(complement(complement(p)).op() - p.op()), 1e-10);
        EXPECT_LT(max_abs(complement(meet(p, q)).op() - join(complement(p), complement(q)).op()), 1e-9);
        EXPECT_LT(max_abs(complement(join(p, q)).op() - meet(complement(p), complement(q)).op()), 1e-9);
        // p <= p v q, so p v q = p v (p^perp ^ (p v q)).
        const Projection j = join(p, q);
        EXPECT_LT(max_abs(join(p, meet(complement(p), j)).op() - j.op()), 1e-9);
        // p ^ (p => q) <= q.
        const Op mp = meet(p, sasaki(p, q)).op();
        EXPECT_LT(max_abs(q.op() * mp - mp), 1e-9);
    }
}

TEST(Propositions, TruthValuesOfSpinAtoms) {
    const Observable sz = obs(oracle::pauli('z'));
    const Proposition up = Proposition::atom(sz, OutcomeSet::of({1.0}));
    EXPECT_LT(max_abs(truth_value(up).op() - projector(Ket::Unit(2, 0))), 1e-12);
    EXPECT_LT(max_abs(truth_value(Proposition::negation(up)).op() - projector(Ket::Unit(2, 1))), 1e-12);
    EXPECT_EQ(truth_value(Proposition::atom(sz, OutcomeSet::all())).rank(), 2u);
    EXPECT_EQ(truth_value(Proposition::atom(sz, OutcomeSet::interval(2.0, 3.0))).rank(), 0u);
    const Proposition x_up = Proposition::atom(obs(oracle::pauli('x')), OutcomeSet::of({1.0}));
    EXPECT_EQ(truth_value(Proposition::conjunction(up, x_up)).rank(), 0u);
    EXPECT_EQ(truth_value(Proposition::disjunction(up, x_up)).rank(), 2u);
    EXPECT_LT(max_abs(truth_value(Proposition::implication(up, x_up)).op() - projector(Ket::Unit(2, 1))), 1e-10);

    const DensityState rho = DensityState::pure(Ket::Unit(2, 0));
    EXPECT_NEAR(probability(up, rho), 1.0, 1e-12);
    EXPECT_NEAR(probability(x_up, rho), 0.5, 1e-12);
    const Proposition pair = Proposition::atom(obs(identity(3)), OutcomeSet::all());
    EXPECT_THROW(Proposition::conjunction(up, pair), ShapeError);
    EXPECT_THROW(probability(up, DensityState::maximally_mixed(3)), ShapeError);
}

TEST(Propositions, DoubleNegationAndDeMorgan) {
    Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        const Observable a = random_observable(3, rng), b = random_observable(3, rng);
        const auto sa = a.spectrum(), sb = b.spectrum();
        const Proposition p = Proposition::atom(a, OutcomeSet::of({sa[0].value, sa[1].value}));
        const Proposition q = Proposition::atom(b, OutcomeSet::of({sb[2].value}));
        const Proposition nn = Proposition::negation(Proposition::negation(p));
        EXPECT_LT(max_abs(truth_value(nn).op() - truth_value(p).op()), 1e-9);
        const Proposition lhs = Proposition::negation(Proposition::conjunction(p, q));
        const Proposition rhs = Proposition::disjunction(Proposition::negation(p), Proposition::negation(q));
        EXPECT_LT(max_abs(truth_value(lhs).op() - truth_value(rhs).op()), 1e-9);
    }
}

TEST(Propositions, EqualityOfCommutingObservables) {
    const Observable z1 = obs(kron(oracle::pauli('z'), identity(2)));
    const Observable z2 = obs(kron(identity(2), oracle::pauli('z')));
    const Projection eq = truth_value(Proposition::equal(z1, z2));
    Op expect = Op::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 1.0;
    EXPECT_LT(max_abs(eq.op() - expect), 1e-10);
    EXPECT_NEAR(probability(Proposition::equal(z1, z2), singlet()), 0.0, 1e-12);
    // sigma_z - sigma_x is invertible: nothing is certain to have equal values.
    EXPECT_EQ(truth_value(Proposition::equal(obs(oracle::pauli('z')), obs(oracle::pauli('x')))).rank(), 0u);
}

TEST(JointDistribution, SingletAndUndefinedCases) {
    const Observable z1 = obs(kron(oracle::pauli('z'), identity(2)));
    const Observable z2 = obs(kron(identity(2), oracle::pauli('z')));
    const JointDistribution mu = joint_distribution(z1, z2, singlet());
    double total = 0.0;
    for (const auto &e : mu.entries) {
        total += e.prob;
        EXPECT_NEAR(e.prob, e.a == e.b ? 0.0 : 0.5, 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(mu.diagonal_mass(), 0.0, 1e-12);
    EXPECT_TRUE(identical_correlation(z1, obs(-kron(identity(2), oracle::pauli('z'))), singlet()));
    EXPECT_FALSE(identical_correlation(z1, z2, singlet()));

    const Observable sz = obs(oracle::pauli('z')), sx = obs(oracle::pauli('x'));
    EXPECT_FALSE(commuting_in_state(sz, sx, DensityState::maximally_mixed(2)));
    EXPECT_THROW(joint_distribution(sz, sx, DensityState::maximally_mixed(2)), UndefinedJointDistributionError);
    EXPECT_FALSE(identical_correlation(sz, sx, DensityState::maximally_mixed(2)));
}

TEST(JointDistribution, CommutingInStateOnly) {
    const Observable a = block('z'), b = block('x');
    const DensityState e2 = DensityState::pure(Ket::Unit(3, 2));
    EXPECT_TRUE(commuting_in_state(a, b, e2));
    EXPECT_FALSE(commuting_in_state(a, b, DensityState::maximally_mixed(3)));
    const JointDistribution mu = joint_distribution(a, b, e2);
    EXPECT_NEAR(mu.diagonal_mass(), 1.0, 1e-12);
    EXPECT_TRUE(identical_correlation(a, b, e2));
    const Projection icp = identical_correlation_projection(a, b);
    EXPECT_LT(max_abs(icp.op() - projector(Ket::Unit(3, 2))), 1e-10);
}

TEST(IdenticalCorrelation, ProjectionMatchesCommutingOracle) {
    Rng rng(9);
    for (int t = 0; t < 30; ++t) {
        const std::size_t d = 2 + t % 4;
        const Op v = random_unitary(d, rng);
        Op da = Op::Zero(d, d), db = Op::Zero(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            da(i, i) = static_cast<double>(rng() % 3);
            db(i, i) = static_cast<double>(rng() % 3);
        }
        const Observable a = obs(v * da * v.adjoint()), b = obs(v * db * v.adjoint());
        // Oracle: sum over shared values of P_A(x) P_B(x).
        Op oracle_p = Op::Zero(d, d);
        for (const auto &ca : a.spectrum())
            for (const auto &cb : b.spectrum())
                if (std::abs(ca.value - cb.value) < 1e-9) oracle_p += ca.projection() * cb.projection();
        const Projection p = identical_correlation_projection(a, b);
        EXPECT_LT(max_abs(p.op() - oracle_p), 1e-9);
        // A state supported in [[A = B]] is identically correlated; rank check on the rest.
        if (p.rank() > 0) {
            const Ket k = (p.basis() * random_pure_state(p.rank(), rng)).normalized();
            EXPECT_TRUE(identical_correlation(a, b, DensityState::pure(k)));
        }
        if (p.rank() < d) {
            EXPECT_FALSE(identical_correlation(a, b, DensityState::maximally_mixed(d)));
        }
    }
}

TEST(IdenticalCorrelation, NonCommutingEquivalence) {
    Rng rng(10);
    for (int t = 0; t < 20; ++t) {
        Op ha = Op::Zero(4, 4), hb = Op::Zero(4, 4);
        ha(0, 0) = hb(0, 0) = 1.0;
        ha.bottomRightCorner(3, 3) = random_hermitian(3, rng);
        hb.bottomRightCorner(3, 3) = random_hermitian(3, rng);
        const Op v = random_unitary(4, rng);
        const Observable a = obs(v * ha * v.adjoint()), b = obs(v * hb * v.adjoint());
        const Projection p = identical_correlation_projection(a, b);
        EXPECT_EQ(p.rank(), 1u);
        EXPECT_LT(max_abs(p.op() - v * projector(Ket::Unit(4, 0)) * v.adjoint()), 1e-8);
        const DensityState in = DensityState::pure(v.col(0));
        EXPECT_TRUE(identical_correlation(a, b, in));
        EXPECT_FALSE(identical_correlation(a, b, random_density(4, 2, rng)));
    }
}

TEST(Invariance, MinimalInvariantSubspace) {
    Op a = Op::Zero(3, 3);
    a(0, 0) = 1.0, a(1, 1) = 2.0, a(2, 2) = 3.0;
    Ket v = Ket::Zero(3);
    v(0) = v(1) = 1.0;
    const DensityState rho = DensityState::pure(v.normalized());
    const Projection c = min_invariant_subspace(obs(a), rho);
    EXPECT_LT(max_abs(c.op() - diag_projection({1, 1, 0}).op()), 1e-10);
    Op b = Op::Zero(3, 3);
    b(1, 2) = b(2, 1) = 1.0;
    EXPECT_EQ(min_invariant_subspace(obs(a), obs(b), rho).rank(), 3u);
    EXPECT_EQ(min_invariant_subspace(obs(a), DensityState::pure(Ket::Unit(3, 2))).rank(), 1u);

    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        const Observable x = random_observable(5, rng);
        Op h = Op::Zero(5, 5);
        h.topLeftCorner(2, 2) = random_hermitian(2, rng);
        h.bottomRightCorner(3, 3) = random_hermitian(3, rng);
        const Observable y = obs(h);
        const DensityState r = random_density(5, 1, rng);
        const Projection px = min_invariant_subspace(x, r);
        EXPECT_LT(max_abs(px.op() * x.op() - x.op() * px.op()), 1e-8);
        EXPECT_LT(max_abs(px.op() * r.op() - r.op()), 1e-8);
        const Projection py = min_invariant_subspace(y, DensityState::pure(Ket::Unit(5, 0)));
        EXPECT_LE(py.rank(), 2u);
        EXPECT_LT(max_abs(py.op() * y.op() - y.op() * py.op()), 1e-8);
    }
}

TEST(Simultaneity, FixedVerdicts) {
    const Observable z1 = obs(kron(oracle::pauli('z'), identity(2)));
    const Observable x1 = obs(kron(oracle::pauli('x'), identity(2)));
    const Observable z2 = obs(kron(identity(2), oracle::pauli('z')));
    const auto r1 = is_simultaneously_measurable(z1, z2, DensityState::maximally_mixed(4));
    EXPECT_EQ(r1.verdict, Verdict::Measurable);
    ASSERT_TRUE(r1.certificate.has_value());
    Op sum = Op::Zero(4, 4);
    for (const auto &o : r1.certificate->outcomes) sum += o.effect;
    EXPECT_LT(max_abs(sum - identity(4)), 1e-10);
    EXPECT_EQ(is_simultaneously_measurable(z1, x1, singlet()).verdict, Verdict::Measurable);
    const Observable sz = obs(oracle::pauli('z')), sx = obs(oracle::pauli('x'));
    EXPECT_EQ(is_simultaneously_measurable(sz, sx, DensityState::maximally_mixed(2)).verdict,
              Verdict::NotMeasurable);
    EXPECT_EQ(is_simultaneously_measurable(sx, sz, DensityState::maximally_mixed(2)).verdict,
              Verdict::NotMeasurable);
}

TEST(Simultaneity, WitnessIsChecked) {
    const Observable z1 = obs(kron(oracle::pauli('z'), identity(2)));
    const Observable z2 = obs(kron(identity(2), oracle::pauli('z')));
    JointPovm good;
    for (const auto &ca : z1.spectrum())
        for (const auto &cb : z2.spectrum())
            good.outcomes.push_back({ca.value, cb.value, ca.projection() * cb.projection()});
    const auto r = is_simultaneously_measurable(z1, z2, DensityState::maximally_mixed(4), &good);
    EXPECT_EQ(r.verdict, Verdict::Measurable);

    // Marginal on y is wrong: y always reported as +1.
    const Observable sz = obs(oracle::pauli('z')), sx = obs(oracle::pauli('x'));
    JointPovm bad;
    for (const auto &c : sz.spectrum()) bad.outcomes.push_back({c.value, 1.0, c.projection()});
    EXPECT_NE(is_simultaneously_measurable(sz, sx, DensityState::maximally_mixed(2), &bad).verdict,
              Verdict::Measurable);
    JointPovm wrong_dim;
    wrong_dim.outcomes.push_back({1.0, 1.0, identity(3)});
    EXPECT_THROW(is_simultaneously_measurable(sz, sx, DensityState::maximally_mixed(2), &wrong_dim), ShapeError);
}
