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

#include "qmtk/qlogic.hpp"

#include <algorithm>
#include <cmath>

namespace qmtk {

namespace {

constexpr double kMeetThreshold = 1e-9;
constexpr double kCommuteInState = 1e-10;
constexpr double kWitnessTol = 1e-10;
constexpr double kExtensionResidual = 1e-8;
constexpr std::size_t kMaxExtensionDim = 16;

bool same_value(double x, double y) {
    return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y));
}

// Eigenvectors of a PSD Hermitian operator with eigenvalue <= threshold.
Op kernel_of_psd(const Op &h, double threshold) {
    Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(h));
    Eigen::Index k = 0;
    while (k < es.eigenvalues().size() && es.eigenvalues()(k) <= threshold) ++k;
    return es.eigenvectors().leftCols(k);
}

Op orthonormalize(const Op &cols) {
    return range_basis(cols, 1e-10);
}

struct Marginal {
    double value;
    Op effect;
};

std::vector<Marginal> marginal(const JointPovm &w, bool first, std::size_t dim) {
    std::vector<Marginal> out;
    for (const auto &o : w.outcomes) {
        const double v = first ? o.x : o.y;
        auto it = std::find_if(out.begin(), out.end(), [&](const Marginal &m) { return same_value(v, m.value); });
        if (it == out.end())
            out.push_back({v, o.effect});
        else
            it->effect += o.effect;
    }
    for (auto &m : out)
        if (m.effect.rows() != static_cast<Eigen::Index>(dim)) throw ShapeError("witness effect dimension mismatch");
    return out;
}

// Marginal condition Pi_x(D) C = E^A(D) C and Tr[Pi_x(D) E^A(G) rho] = 0 for
// disjoint D, G. Returns an empty string on success.
std::string check_marginal(const std::vector<Marginal> &m, const Observable &a, const Op &c, const DensityState &rho,
                           const char *label) {
    std::vector<double> values;
    for (const auto &x : m) values.push_back(x.value);
    for (const auto &s : a.spectrum())
        if (std::none_of(values.begin(), values.end(), [&](double v) { return same_value(s.value, v); }))
            values.push_back(s.value);
    for (double v : values) {
        Op pi = Op::Zero(a.dim(), a.dim());
        for (const auto &x : m)
            if (same_value(x.value, v)) pi = x.effect;
        const Op e = a.spectral_projection(OutcomeSet::of({v}));
        if (((pi - e) * c).cwiseAbs().maxCoeff() > kWitnessTol)
            return std::string("marginal condition fails for ") + label;
        for (const auto &s : a.spectrum()) {
            if (same_value(s.value, v)) continue;
            if (std::abs(trace_product(pi * s.projection(), rho.op())) > kWitnessTol)
                return std::string("disjoint-support condition fails for ") + label;
        }
    }
    return {};
}

std::string check_witness(const Observable &a, const Observable &b, const DensityState &rho, const JointPovm &w,
                          const Op &ca, const Op &cb) {
    const std::size_t d = a.dim();
    Op total = Op::Zero(d, d);
    for (const auto &o : w.outcomes) {
        if (o.effect.rows() != static_cast<Eigen::Index>(d) || o.effect.cols() != static_cast<Eigen::Index>(d))
            throw ShapeError("witness effect dimension mismatch");
        if (!is_hermitian(o.effect)) return "witness effect is not Hermitian";
        Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(o.effect), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kDefaultTolerances.psd) return "witness effect is not positive";
        total += o.effect;
    }
    if ((total - Op::Identity(d, d)).cwiseAbs().maxCoeff() > kDefaultTolerances.herm)
        return "witness effects do not sum to the identity";
    if (auto r = check_marginal(marginal(w, true, d), a, ca, rho, "A"); !r.empty()) return r;
    if (auto r = check_marginal(marginal(w, false, d), b, cb, rho, "B"); !r.empty()) return r;
    return {};
}

JointPovm joint_spectral_measure(const Observable &a, const Observable &b) {
    JointPovm w;
    for (const auto &p : a.spectrum())
        for (const auto &q : b.spectrum()) {
            const Op e = hermitian_part(p.projection() * q.projection());
            if (e.cwiseAbs().maxCoeff() > 1e-12) w.outcomes.push_back({p.value, q.value, e});
        }
    return w;
}

bool globally_commute(const Observable &a, const Observable &b) {
    return commutator(a.op(), b.op()).cwiseAbs().maxCoeff() <= kDefaultTolerances.herm;
}

// Hermitian X' with [X', Y] = 0 and X' C = X C, if the linear system is
// consistent.
std::optional<Op> commuting_extension(const Op &x, const Op &y, const Op &c) {
    const Eigen::Index d = x.rows();
    std::vector<Op> basis;
    const double r2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index k = 0; k < d; ++k) {
        Op h = Op::Zero(d, d);
        h(k, k) = 1.0;
        basis.push_back(h);
        for (Eigen::Index l = k + 1; l < d; ++l) {
            Op s = Op::Zero(d, d), t = Op::Zero(d, d);
            s(k, l) = s(l, k) = r2;
            t(k, l) = Complex(0.0, r2);
            t(l, k) = Complex(0.0, -r2);
            basis.push_back(s);
            basis.push_back(t);
        }
    }
    const Eigen::Index n = d * d;
    Eigen::MatrixXd m(4 * n, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const Ket v1 = vec(commutator(basis[j], y));
        const Ket v2 = vec(basis[j] * c);
        const auto col = static_cast<Eigen::Index>(j);
        m.col(col).segment(0, n) = v1.real();
        m.col(col).segment(n, n) = v1.imag();
        m.col(col).segment(2 * n, n) = v2.real();
        m.col(col).segment(3 * n, n) = v2.imag();
    }
    const Ket target = vec(x * c);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 * n);
    rhs.segment(2 * n, n) = target.real();
    rhs.segment(3 * n, n) = target.imag();
    const Eigen::VectorXd sol = m.completeOrthogonalDecomposition().solve(rhs);
    if ((m * sol - rhs).norm() > kExtensionResidual * std::max(1.0, rhs.norm())) return std::nullopt;
    Op out = Op::Zero(d, d);
    for (std::size_t j = 0; j < basis.size(); ++j) out += sol(static_cast<Eigen::Index>(j)) * basis[j];
    return hermitian_part(out);
}

bool is_identity(const Op &p) {
    return (p - Op::Identity(p.rows(), p.cols())).cwiseAbs().maxCoeff() <= kDefaultTolerances.herm;
}

}  // namespace

// ---------------------------------------------------------------------------
// Projections and the lattice

Projection::Projection(Op p, const Tolerances &tol) : op_(std::move(p)) {
    require_square(op_, "Projection");
    if (!is_projection(op_, tol.herm)) throw InvalidOperatorError("Projection: operator is not an orthogonal projection");
}

Projection Projection::onto(const Op &basis, std::size_t dim) {
    return Projection(hermitian_part(projection_onto(basis, dim)));
}

Projection Projection::zero(std::size_t dim) {
    return Projection(Op::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

Projection Projection::identity(std::size_t dim) {
    return Projection(qmtk::identity(dim));
}

std::size_t Projection::rank() const {
    return static_cast<std::size_t>(std::llround(op_.trace().real()));
}

Op Projection::basis() const {
    return range_basis(op_, 0.5);
}

Projection complement(const Projection &p) {
    return Projection(qmtk::identity(p.dim()) - p.op());
}

Projection meet(const Projection &p, const Projection &q) {
    require_same_dim(p.op(), q.op(), "meet");
    const Op h = 2.0 * qmtk::identity(p.dim()) - p.op() - q.op();
    return Projection::onto(kernel_of_psd(h, kMeetThreshold), p.dim());
}

Projection join(const Projection &p, const Projection &q) {
    return complement(meet(complement(p), complement(q)));
}

Projection sasaki(const Projection &p, const Projection &q) {
    return join(complement(p), meet(p, q));
}

LatticeOps lattice_ops(const Projection &p, const Projection &q) {
    return {meet(p, q), join(p, q), complement(p), sasaki(p, q)};
}

// ---------------------------------------------------------------------------
// Propositions

Proposition Proposition::atom(Observable a, OutcomeSet set) {
    return Proposition(Atom{std::move(a), std::move(set)});
}

Proposition Proposition::equal(Observable a, Observable b) {
    require_same_dim(a.op(), b.op(), "Proposition::equal");
    return Proposition(Equal{std::move(a), std::move(b)});
}

Proposition Proposition::negation(Proposition p) {
    return Proposition(Compound{Connective::Not, {std::move(p)}});
}

Proposition Proposition::conjunction(Proposition p, Proposition q) {
    if (p.dim() != q.dim()) throw ShapeError("Proposition: dimension mismatch");
    return Proposition(Compound{Connective::And, {std::move(p), std::move(q)}});
}

Proposition Proposition::disjunction(Proposition p, Proposition q) {
    if (p.dim() != q.dim()) throw ShapeError("Proposition: dimension mismatch");
    return Proposition(Compound{Connective::Or, {std::move(p), std::move(q)}});
}

Proposition Proposition::implication(Proposition p, Proposition q) {
    if (p.dim() != q.dim()) throw ShapeError("Proposition: dimension mismatch");
    return Proposition(Compound{Connective::Implies, {std::move(p), std::move(q)}});
}

std::size_t Proposition::dim() const {
    struct Visitor {
        std::size_t operator()(const Atom &a) const {
            return a.obs.dim();
        }
        std::size_t operator()(const Equal &e) const {
            return e.a.dim();
        }
        std::size_t operator()(const Compound &c) const {
            return c.args.front().dim();
        }
    };
    return std::visit(Visitor{}, *node_);
}

Projection truth_value(const Proposition &phi) {
    struct Visitor {
        Projection operator()(const Proposition::Atom &a) const {
            return Projection(hermitian_part(a.obs.spectral_projection(a.set)));
        }
        Projection operator()(const Proposition::Equal &e) const {
            return identical_correlation_projection(e.a, e.b);
        }
        Projection operator()(const Proposition::Compound &c) const {
            switch (c.op) {
            case Proposition::Connective::Not:
                return complement(truth_value(c.args[0]));
            case Proposition::Connective::And:
                return meet(truth_value(c.args[0]), truth_value(c.args[1]));
            case Proposition::Connective::Or:
                return join(truth_value(c.args[0]), truth_value(c.args[1]));
            case Proposition::Connective::Implies:
                return sasaki(truth_value(c.args[0]), truth_value(c.args[1]));
            }
            throw InvalidOperatorError("Proposition: unknown connective");
        }
    };
    return std::visit(Visitor{}, phi.node());
}

double probability(const Proposition &phi, const DensityState &rho) {
    if (phi.dim() != rho.dim()) throw ShapeError("probability: state dimension mismatch");
    return trace_product(truth_value(phi).op(), rho.op()).real();
}

// ---------------------------------------------------------------------------
// States, joint distributions, identical correlation

bool commuting_in_state(const Observable &a, const Observable &b, const DensityState &rho, double tol) {
    require_same_dim(a.op(), b.op(), "commuting_in_state");
    require_same_dim(a.op(), rho.op(), "commuting_in_state");
    for (const auto &p : a.spectrum()) {
        const Op pp = p.projection();
        for (const auto &q : b.spectrum()) {
            const Op qq = q.projection();
            if (operator_norm(commutator(pp, qq) * rho.op()) > tol) return false;
        }
    }
    return true;
}

double JointDistribution::diagonal_mass() const {
    double s = 0.0;
    for (const auto &e : entries)
        if (same_value(e.a, e.b)) s += e.prob;
    return s;
}

JointDistribution joint_distribution(const Observable &a, const Observable &b, const DensityState &rho) {
    if (!commuting_in_state(a, b, rho, kCommuteInState))
        throw UndefinedJointDistributionError("joint_distribution: observables do not commute in the state");
    JointDistribution mu;
    for (const auto &p : a.spectrum()) {
        const Op pp = p.projection();
        for (const auto &q : b.spectrum()) {
            double v = trace_product(pp * q.projection(), rho.op()).real();
            if (v < 0.0 && v >= -kDefaultTolerances.trace) v = 0.0;
            mu.entries.push_back({p.value, q.value, v});
        }
    }
    return mu;
}

bool identical_correlation(const Observable &a, const Observable &b, const DensityState &rho) {
    if (!commuting_in_state(a, b, rho, kCommuteInState)) return false;
    return std::abs(joint_distribution(a, b, rho).diagonal_mass() - 1.0) <= kDefaultTolerances.trace;
}

Projection identical_correlation_projection(const Observable &a, const Observable &b) {
    require_same_dim(a.op(), b.op(), "identical_correlation_projection");
    const std::size_t d = a.dim();
    Op q = null_basis(a.op() - b.op(), 1e-9 * std::max(1.0, operator_norm(a.op() - b.op())));
    while (q.cols() > 0) {
        const Op outside = Op::Identity(d, d) - q * q.adjoint();
        Op stacked(2 * d, q.cols());
        stacked.topRows(d) = outside * a.op() * q;
        stacked.bottomRows(d) = outside * b.op() * q;
        const Op keep = null_basis(stacked, 1e-9 * std::max({1.0, operator_norm(a.op()), operator_norm(b.op())}));
        if (keep.cols() == q.cols()) break;
        q = orthonormalize(q * keep);
    }
    return Projection::onto(q, d);
}

Projection min_invariant_subspace(const Observable &a, const DensityState &rho) {
    require_same_dim(a.op(), rho.op(), "min_invariant_subspace");
    Op q = range_basis(rho.op(), 1e-10);
    for (;;) {
        Op stacked(q.rows(), 2 * q.cols());
        stacked << q, a.op() * q;
        const Op next = orthonormalize(stacked);
        if (next.cols() == q.cols()) break;
        q = next;
    }
    return Projection::onto(q, a.dim());
}

Projection min_invariant_subspace(const Observable &a, const Observable &b, const DensityState &rho) {
    require_same_dim(a.op(), b.op(), "min_invariant_subspace");
    require_same_dim(a.op(), rho.op(), "min_invariant_subspace");
    Op q = range_basis(rho.op(), 1e-10);
    for (;;) {
        Op stacked(q.rows(), 3 * q.cols());
        stacked << q, a.op() * q, b.op() * q;
        const Op next = orthonormalize(stacked);
        if (next.cols() == q.cols()) break;
        q = next;
    }
    return Projection::onto(q, a.dim());
}

// ---------------------------------------------------------------------------
// Simultaneous measurability

SimultaneityResult is_simultaneously_measurable(const Observable &a, const Observable &b, const DensityState &rho,
                                                const JointPovm *witness) {
    require_same_dim(a.op(), b.op(), "is_simultaneously_measurable");
    require_same_dim(a.op(), rho.op(), "is_simultaneously_measurable");
    const Op ca = min_invariant_subspace(a, rho).op();
    const Op cb = min_invariant_subspace(b, rho).op();

    std::string rejected;
    if (witness) {
        rejected = check_witness(a, b, rho, *witness, ca, cb);
        if (rejected.empty()) return {Verdict::Measurable, *witness, "witness satisfies the marginal conditions"};
        rejected = "witness rejected (" + rejected + "); ";
    }

    auto certify = [&](const Observable &x, const Observable &y, const char *how) -> std::optional<SimultaneityResult> {
        JointPovm w = joint_spectral_measure(x, y);
        if (!check_witness(a, b, rho, w, ca, cb).empty()) return std::nullopt;
        return SimultaneityResult{Verdict::Measurable, std::move(w), rejected + how};
    };

    if (globally_commute(a, b))
        if (auto r = certify(a, b, "joint spectral measure of commuting observables")) return *r;

    const bool small = a.dim() <= kMaxExtensionDim;
    std::optional<Op> a_ext, b_ext;
    if (small) {
        a_ext = commuting_extension(a.op(), b.op(), ca);
        if (a_ext)
            if (auto r = certify(Observable::from_hermitian(*a_ext), b, "commuting extension of A on C(A, rho)"))
                return *r;
        b_ext = commuting_extension(b.op(), a.op(), cb);
        if (b_ext)
            if (auto r = certify(a, Observable::from_hermitian(*b_ext), "commuting extension of B on C(B, rho)"))
                return *r;
        // A sharp marginal forces every effect of a joint POVM to commute with
        // it; the first moment of the other marginal is then an extension.
        if (is_identity(ca) && !b_ext)
            return {Verdict::NotMeasurable, std::nullopt,
                    rejected + "C(A, rho) = I and no extension of B commutes with A"};
        if (is_identity(cb) && !a_ext)
            return {Verdict::NotMeasurable, std::nullopt,
                    rejected + "C(B, rho) = I and no extension of A commutes with B"};
    }
    return {Verdict::Unknown, std::nullopt, rejected + "no certificate or obstruction found"};
}

}  // namespace qmtk
