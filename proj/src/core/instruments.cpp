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

#include "qmtk/instruments.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Sparse>

namespace qmtk {

namespace {

using SparseOp = Eigen::SparseMatrix<Complex>;

constexpr std::size_t kSparseMinDim = 32;
constexpr double kKrausDropThreshold = 1e-12;

double min_eigenvalue(const Op &x) {
    const Op h = hermitian_part(x);
    if (h.isDiagonal(0.0)) return h.diagonal().real().minCoeff();
    Eigen::SelfAdjointEigenSolver<Op> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool values_close(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

template <class Outcomes>
void require_distinct_values(const Outcomes &outcomes, const char *what) {
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        for (std::size_t j = i + 1; j < outcomes.size(); ++j)
            if (values_close(outcomes[i].value, outcomes[j].value))
                throw InvalidOperatorError(std::string(what) + ": outcome values must be distinct");
}

void require_state_dim(std::size_t dim, const DensityState &rho, const char *what) {
    if (rho.dim() != dim) {
        std::ostringstream os;
        os << what << ": state of dimension " << rho.dim() << " given to an instrument on dimension " << dim;
        throw ShapeError(os.str());
    }
}

}  // namespace

// ---------------------------------------------------------------------------

Povm::Povm(std::vector<PovmOutcome> outcomes, const Tolerances &tol) : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw InvalidOperatorError("Povm: no outcomes");
    dim_ = static_cast<std::size_t>(outcomes_.front().effect.rows());
    Op total = Op::Zero(outcomes_.front().effect.rows(), outcomes_.front().effect.rows());
    for (const auto &o : outcomes_) {
        require_square(o.effect, "Povm");
        require_same_dim(o.effect, total, "Povm");
        if (!is_hermitian(o.effect, tol.herm)) throw InvalidOperatorError("Povm: effect is not Hermitian");
        if (min_eigenvalue(o.effect) < -tol.psd) throw InvalidOperatorError("Povm: effect is not positive");
        total += o.effect;
    }
    require_distinct_values(outcomes_, "Povm");
    if ((total - identity(dim_)).cwiseAbs().maxCoeff() > tol.herm)
        throw InvalidOperatorError("Povm: effects do not sum to the identity");
}

Op Povm::effect(const OutcomeSet &set) const {
    Op e = Op::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (const auto &o : outcomes_)
        if (set.contains(o.value)) e += o.effect;
    return e;
}

double Povm::probability(const OutcomeSet &set, const DensityState &rho) const {
    require_state_dim(dim_, rho, "Povm::probability");
    return expectation(effect(set), rho);
}

// ---------------------------------------------------------------------------

struct CpInstrument::SparseCache {
    // Indexed [outcome][kraus]; empty optional means "use the dense operator".
    std::vector<std::vector<std::optional<std::pair<SparseOp, SparseOp>>>> ops;
};

CpInstrument::CpInstrument(std::vector<KrausOutcome> outcomes, const Tolerances &tol)
    : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw InvalidOperatorError("CpInstrument: no outcomes");
    if (outcomes_.front().kraus.empty()) throw InvalidOperatorError("CpInstrument: outcome without Kraus operators");
    dim_ = static_cast<std::size_t>(outcomes_.front().kraus.front().rows());
    const auto d = static_cast<Eigen::Index>(dim_);

    auto cache = std::make_shared<SparseCache>();
    cache->ops.resize(outcomes_.size());
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        const auto &o = outcomes_[i];
        if (o.kraus.empty()) throw InvalidOperatorError("CpInstrument: outcome without Kraus operators");
        for (const auto &k : o.kraus) {
            require_square(k, "CpInstrument");
            if (k.rows() != d) throw ShapeError("CpInstrument: Kraus operators of different dimensions");
            std::optional<std::pair<SparseOp, SparseOp>> sp;
            if (dim_ >= kSparseMinDim) {
                const auto nnz = (k.array() != Complex(0.0)).count();
                if (static_cast<std::size_t>(nnz) * 8 <= dim_ * dim_) {
                    SparseOp s = k.sparseView();
                    SparseOp sa = s.adjoint();
                    sp.emplace(std::move(s), std::move(sa));
                }
            }
            cache->ops[i].push_back(std::move(sp));
        }
    }
    sparse_ = std::move(cache);
    require_distinct_values(outcomes_, "CpInstrument");

    const Op one = identity(dim_);
    const Op total = total_dual(one);
    if ((total - one).cwiseAbs().maxCoeff() > tol.herm)
        throw InvalidOperatorError("CpInstrument: sum of K^dagger K differs from the identity");
}

CpInstrument CpInstrument::projective(const Observable &a) {
    std::vector<KrausOutcome> outcomes;
    for (const auto &c : a.spectrum()) outcomes.push_back({c.value, {c.projection()}});
    return CpInstrument(std::move(outcomes));
}

std::size_t CpInstrument::kraus_count() const {
    std::size_t n = 0;
    for (const auto &o : outcomes_) n += o.kraus.size();
    return n;
}

Op CpInstrument::sandwich(std::size_t outcome, std::size_t j, const Op &x, bool dual) const {
    const auto &sp = sparse_->ops[outcome][j];
    if (sp) {
        const auto &[k, kd] = *sp;
        if (dual) {
            const Op y = kd * x;
            return y * k;
        }
        const Op y = k * x;
        return y * kd;
    }
    const Op &k = outcomes_[outcome].kraus[j];
    if (dual) return k.adjoint() * x * k;
    return k * x * k.adjoint();
}

Op CpInstrument::apply(const OutcomeSet &set, const Op &x) const {
    if (static_cast<std::size_t>(x.rows()) != dim_ || x.rows() != x.cols())
        throw ShapeError("CpInstrument::apply: operator dimension mismatch");
    Op out = Op::Zero(x.rows(), x.cols());
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (!set.contains(outcomes_[i].value)) continue;
        for (std::size_t j = 0; j < outcomes_[i].kraus.size(); ++j) out += sandwich(i, j, x, false);
    }
    return out;
}

Op CpInstrument::apply_dual(const OutcomeSet &set, const Op &x) const {
    if (static_cast<std::size_t>(x.rows()) != dim_ || x.rows() != x.cols())
        throw ShapeError("CpInstrument::apply_dual: operator dimension mismatch");
    Op out = Op::Zero(x.rows(), x.cols());
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (!set.contains(outcomes_[i].value)) continue;
        for (std::size_t j = 0; j < outcomes_[i].kraus.size(); ++j) out += sandwich(i, j, x, true);
    }
    return out;
}

Op CpInstrument::superoperator(std::size_t k) const {
    const auto d2 = static_cast<Eigen::Index>(dim_ * dim_);
    Op s = Op::Zero(d2, d2);
    for (const auto &kr : outcomes_.at(k).kraus) s += kron(Op(kr.conjugate()), kr);
    return s;
}

// ---------------------------------------------------------------------------

DlInstrument::DlInstrument(std::size_t dim, std::vector<SuperopOutcome> outcomes, const Tolerances &tol)
    : dim_(dim), outcomes_(std::move(outcomes)) {
    if (dim_ == 0) throw ShapeError("DlInstrument: zero dimension");
    if (outcomes_.empty()) throw InvalidOperatorError("DlInstrument: no outcomes");
    const auto d = static_cast<Eigen::Index>(dim_);
    for (const auto &o : outcomes_)
        if (o.superop.rows() != d * d || o.superop.cols() != d * d)
            throw ShapeError("DlInstrument: superoperator is not dim^2 x dim^2");
    require_distinct_values(outcomes_, "DlInstrument");

    // Hermiticity preservation on a Hermitian operator basis, and trace
    // preservation of the total map on matrix units.
    Op total = Op::Zero(d * d, d * d);
    for (const auto &o : outcomes_) total += o.superop;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) {
            std::vector<Op> probes;
            Op e = Op::Zero(d, d);
            if (i == j) {
                e(i, i) = 1.0;
                probes.push_back(e);
            } else {
                e(i, j) = 1.0;
                e(j, i) = 1.0;
                probes.push_back(e);
                Op f = Op::Zero(d, d);
                f(i, j) = Complex(0.0, 1.0);
                f(j, i) = Complex(0.0, -1.0);
                probes.push_back(f);
            }
            for (const auto &p : probes) {
                for (const auto &o : outcomes_)
                    if (!is_hermitian(unvec(o.superop * vec(p), dim_), tol.herm))
                        throw InvalidOperatorError("DlInstrument: outcome map does not preserve Hermiticity");
                const Op out = unvec(total * vec(p), dim_);
                if (std::abs(out.trace() - p.trace()) > tol.trace)
                    throw InvalidOperatorError("DlInstrument: total map is not trace preserving");
            }
        }
    }
}

DlInstrument DlInstrument::from_cp(const CpInstrument &inst) {
    std::vector<SuperopOutcome> outcomes;
    for (std::size_t k = 0; k < inst.outcomes().size(); ++k)
        outcomes.push_back({inst.outcomes()[k].value, inst.superoperator(k)});
    return DlInstrument(inst.dim(), std::move(outcomes));
}

Op DlInstrument::apply(const OutcomeSet &set, const Op &x) const {
    if (static_cast<std::size_t>(x.rows()) != dim_ || x.rows() != x.cols())
        throw ShapeError("DlInstrument::apply: operator dimension mismatch");
    const Ket v = vec(x);
    Ket out = Ket::Zero(v.size());
    for (const auto &o : outcomes_)
        if (set.contains(o.value)) out += o.superop * v;
    return unvec(out, dim_);
}

Op DlInstrument::apply_dual(const OutcomeSet &set, const Op &x) const {
    // Tr[Phi*(X) rho] = Tr[X Phi(rho)]  =>  vec(Phi*(X)^dagger) = S^dagger vec(X^dagger).
    if (static_cast<std::size_t>(x.rows()) != dim_ || x.rows() != x.cols())
        throw ShapeError("DlInstrument::apply_dual: operator dimension mismatch");
    const Ket v = vec(x.adjoint());
    Ket out = Ket::Zero(v.size());
    for (const auto &o : outcomes_)
        if (set.contains(o.value)) out += o.superop.adjoint() * v;
    return unvec(out, dim_).adjoint();
}

// ---------------------------------------------------------------------------

MeasuringProcess::MeasuringProcess(std::size_t object_dim, DensityState probe_state, Op unitary, Observable meter,
                                   const Tolerances &tol)
    : object_dim_(object_dim), probe_state_(std::move(probe_state)), unitary_(std::move(unitary)),
      meter_(std::move(meter)) {
    if (object_dim_ == 0) throw ShapeError("MeasuringProcess: zero object dimension");
    const auto total = static_cast<Eigen::Index>(object_dim_ * probe_state_.dim());
    require_square(unitary_, "MeasuringProcess");
    if (unitary_.rows() != total) throw ShapeError("MeasuringProcess: unitary is not on H (x) K");
    if (meter_.dim() != probe_state_.dim()) throw ShapeError("MeasuringProcess: meter is not on K");
    if (!is_unitary(unitary_, tol.herm)) throw InvalidOperatorError("MeasuringProcess: U is not unitary");
}

// ---------------------------------------------------------------------------

double born_probability(const Observable &a, const OutcomeSet &set, const DensityState &rho) {
    require_state_dim(a.dim(), rho, "born_probability");
    return expectation(a.spectral_projection(set), rho);
}

InstrumentResult apply_instrument(const CpInstrument &inst, const OutcomeSet &set, const DensityState &rho) {
    require_state_dim(inst.dim(), rho, "apply_instrument");
    Op out = inst.apply(set, rho.op());
    const double p = out.trace().real();
    return {p, std::move(out)};
}

InstrumentResult apply_instrument(const DlInstrument &inst, const OutcomeSet &set, const DensityState &rho) {
    require_state_dim(inst.dim(), rho, "apply_instrument");
    Op out = inst.apply(set, rho.op());
    const double p = out.trace().real();
    return {p, std::move(out)};
}

Povm povm_of_instrument(const CpInstrument &inst) {
    std::vector<PovmOutcome> effects;
    const Op one = identity(inst.dim());
    for (const auto &o : inst.outcomes())
        effects.push_back({o.value, hermitian_part(inst.apply_dual(OutcomeSet::of({o.value}), one))});
    return Povm(std::move(effects));
}

Povm povm_of_instrument(const DlInstrument &inst) {
    std::vector<PovmOutcome> effects;
    const Op one = identity(inst.dim());
    for (const auto &o : inst.outcomes())
        effects.push_back({o.value, hermitian_part(inst.apply_dual(OutcomeSet::of({o.value}), one))});
    return Povm(std::move(effects));
}

PosteriorFamily posterior_states(const CpInstrument &inst, const DensityState &rho, const Tolerances &tol) {
    require_state_dim(inst.dim(), rho, "posterior_states");
    PosteriorFamily family;
    for (const auto &o : inst.outcomes()) {
        const Op out = inst.apply(OutcomeSet::of({o.value}), rho.op());
        const double p = out.trace().real();
        if (p <= tol.prob) continue;
        family.posteriors.push_back({o.value, p, DensityState(hermitian_part(out) / p)});
    }
    family.all_below_threshold = family.posteriors.empty();
    return family;
}

// ---------------------------------------------------------------------------

namespace {

/// Minimal Kraus form of a CP map from its unnormalized Choi matrix
/// sum_ij |i><j| (x) Phi(|i><j|) = sum_K |K>><<K|, with |K>>[i*d + a] = K(a, i).
std::vector<Op> kraus_from_choi(const Op &choi, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(choi));
    std::vector<Op> kraus;
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
        const double lambda = es.eigenvalues()(k);
        if (lambda < kKrausDropThreshold) break;
        const Ket v = std::sqrt(lambda) * es.eigenvectors().col(k);
        Op kr(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index a = 0; a < d; ++a) kr(a, i) = v(i * d + a);
        kraus.push_back(std::move(kr));
    }
    if (kraus.empty()) kraus.push_back(Op::Zero(d, d));
    return kraus;
}

Op unnormalized_choi_from_kraus(const std::vector<Op> &kraus, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Op choi = Op::Zero(d * d, d * d);
    for (const auto &k : kraus) {
        Ket v(d * d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index a = 0; a < d; ++a) v(i * d + a) = k(a, i);
        choi += v * v.adjoint();
    }
    return choi;
}

}  // namespace

CpInstrument instrument_of_process(const MeasuringProcess &mp) {
    const auto d = static_cast<Eigen::Index>(mp.object_dim());
    const auto dk = static_cast<Eigen::Index>(mp.probe_dim());
    const Op &u = mp.unitary();

    Eigen::SelfAdjointEigenSolver<Op> probe(hermitian_part(mp.probe_state().op()));
    std::vector<KrausOutcome> outcomes;
    for (const auto &comp : mp.meter().spectrum()) {
        std::vector<Op> raw;
        for (Eigen::Index l = 0; l < dk; ++l) {
            const double p = probe.eigenvalues()(l);
            if (p <= kKrausDropThreshold) continue;
            const Ket f = probe.eigenvectors().col(l);
            // W = U (1 (x) |f>), a (d*dk) x d matrix.
            Op w = Op::Zero(d * dk, d);
            for (Eigen::Index b = 0; b < d; ++b)
                for (Eigen::Index c = 0; c < dk; ++c) w.col(b) += f(c) * u.col(b * dk + c);
            for (Eigen::Index k = 0; k < comp.basis.cols(); ++k) {
                const Ket e = comp.basis.col(k);
                Op kr = Op::Zero(d, d);
                for (Eigen::Index a = 0; a < d; ++a)
                    for (Eigen::Index c = 0; c < dk; ++c) kr.row(a) += std::conj(e(c)) * w.row(a * dk + c);
                raw.push_back(std::sqrt(p) * kr);
            }
        }
        outcomes.push_back({comp.value, kraus_from_choi(unnormalized_choi_from_kraus(raw, mp.object_dim()),
                                                        mp.object_dim())});
    }
    return CpInstrument(std::move(outcomes));
}

MeasuringProcess process_of_instrument(const CpInstrument &inst) {
    const auto d = static_cast<Eigen::Index>(inst.dim());
    const auto m = static_cast<Eigen::Index>(inst.kraus_count());
    const Eigen::Index n = d * m;

    // Probe basis |j> enumerates the (outcome, Kraus index) pairs.
    std::vector<const Op *> kraus;
    std::vector<double> values;
    for (const auto &o : inst.outcomes())
        for (const auto &k : o.kraus) {
            kraus.push_back(&k);
            values.push_back(o.value);
        }

    // Columns a*m + 0 hold the isometry V|a> = sum_j K_j|a> (x) |j>.
    Op u = Op::Zero(n, n);
    std::vector<bool> filled(static_cast<std::size_t>(n), false);
    std::vector<Ket> accepted;
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index j = 0; j < m; ++j) u.col(a * m + j).setZero();
        for (Eigen::Index j = 0; j < m; ++j)
            for (Eigen::Index b = 0; b < d; ++b) u(b * m + j, a * m) = (*kraus[static_cast<std::size_t>(j)])(b, a);
        filled[static_cast<std::size_t>(a * m)] = true;
        accepted.push_back(u.col(a * m));
    }

    // Complete with modified Gram-Schmidt over the computational basis.
    Eigen::Index next_slot = 0;
    auto advance_slot = [&] {
        while (next_slot < n && filled[static_cast<std::size_t>(next_slot)]) ++next_slot;
    };
    advance_slot();
    for (double threshold : {1e-2, 1e-10}) {
        for (Eigen::Index c = 0; c < n && next_slot < n; ++c) {
            Ket v = Ket::Zero(n);
            v(c) = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto &q : accepted) v -= q.dot(v) * q;
            const double norm = v.norm();
            if (norm <= threshold) continue;
            v /= norm;
            accepted.push_back(v);
            u.col(next_slot) = v;
            filled[static_cast<std::size_t>(next_slot)] = true;
            advance_slot();
        }
    }
    if (next_slot < n) throw NumericalConsistencyError("process_of_instrument: unitary completion failed");

    std::vector<std::pair<double, Op>> meter;
    for (const auto &o : inst.outcomes()) {
        Op q = Op::Zero(m, m);
        for (Eigen::Index j = 0; j < m; ++j)
            if (values[static_cast<std::size_t>(j)] == o.value) q(j, j) = 1.0;
        meter.emplace_back(o.value, q);
    }
    Ket f0 = Ket::Zero(m);
    f0(0) = 1.0;
    return MeasuringProcess(inst.dim(), DensityState::pure(f0), std::move(u), Observable::from_spectrum(meter));
}

// ---------------------------------------------------------------------------

Op choi_matrix(const Op &superop, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (superop.rows() != d * d || superop.cols() != d * d) throw ShapeError("choi_matrix: superoperator shape");
    Op choi = Op::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            const Op out = unvec(superop.col(i + j * d), dim);
            choi.block(i * d, j * d, d, d) = out;
        }
    return choi / static_cast<double>(dim);
}

CpCheck is_completely_positive(const DlInstrument &inst, const Tolerances &tol) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto &o : inst.outcomes()) {
        Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(choi_matrix(o.superop, inst.dim())),
                                             Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues()(0));
    }
    return {worst >= -tol.psd, worst};
}

DlInstrument transpose_composed_instrument(const Observable &a) {
    const auto d = static_cast<Eigen::Index>(a.dim());
    // vec(X^T) = swap * vec(X)
    Op swap = Op::Zero(d * d, d * d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) swap(c + r * d, r + c * d) = 1.0;
    std::vector<SuperopOutcome> outcomes;
    for (const auto &comp : a.spectrum()) {
        const Op p = comp.projection();
        outcomes.push_back({comp.value, swap * kron(Op(p.transpose()), p)});
    }
    return DlInstrument(a.dim(), std::move(outcomes));
}

Op extend_with_identity(const DlInstrument &inst, const OutcomeSet &set, const Op &x, std::size_t ancilla_dim) {
    const auto d = static_cast<Eigen::Index>(inst.dim());
    const auto da = static_cast<Eigen::Index>(ancilla_dim);
    require_square(x, "extend_with_identity");
    if (x.rows() != d * da) throw ShapeError("extend_with_identity: operator is not on H (x) C^n");
    Op out = Op::Zero(d * da, d * da);
    for (Eigen::Index k = 0; k < da; ++k)
        for (Eigen::Index l = 0; l < da; ++l) {
            Op block(d, d);
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j) block(i, j) = x(i * da + k, j * da + l);
            const Op mapped = inst.apply(set, block);
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j) out(i * da + k, j * da + l) = mapped(i, j);
        }
    return out;
}

Op evolution_unitary(const Op &hamiltonian, double t, double hbar) {
    if (!(hbar > 0.0)) throw DomainError("evolution_unitary: hbar must be positive");
    return exp_i_hermitian(hamiltonian, -t / hbar);
}

double sequential_joint_distribution(std::span<const CpInstrument> insts, std::span<const Op> evolutions,
                                     const DensityState &rho, std::span<const OutcomeSet> sets) {
    if (insts.size() != evolutions.size() || insts.size() != sets.size())
        throw ShapeError("sequential_joint_distribution: list lengths differ");
    Op x = rho.op();
    for (std::size_t k = 0; k < insts.size(); ++k) {
        const Op &u = evolutions[k];
        require_same_dim(u, x, "sequential_joint_distribution");
        if (!is_unitary(u)) throw InvalidOperatorError("sequential_joint_distribution: evolution is not unitary");
        x = insts[k].apply(sets[k], u * x * u.adjoint());
    }
    return x.trace().real();
}

double sequential_joint_distribution(std::span<const CpInstrument> insts, std::span<const Op> hamiltonians,
                                     std::span<const double> times, const DensityState &rho,
                                     std::span<const OutcomeSet> sets, double hbar) {
    if (hamiltonians.size() != times.size()) throw ShapeError("sequential_joint_distribution: list lengths differ");
    std::vector<Op> evolutions;
    double previous = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!is_hermitian(hamiltonians[k]))
            throw InvalidOperatorError("sequential_joint_distribution: Hamiltonian is not Hermitian");
        evolutions.push_back(evolution_unitary(hamiltonians[k], times[k] - previous, hbar));
        previous = times[k];
    }
    return sequential_joint_distribution(insts, evolutions, rho, sets);
}

double superoperator_distance(const CpInstrument &a, const CpInstrument &b) {
    if (a.dim() != b.dim()) throw ShapeError("superoperator_distance: dimension mismatch");
    double total = 0.0;
    std::vector<bool> matched(b.outcomes().size(), false);
    for (std::size_t i = 0; i < a.outcomes().size(); ++i) {
        const Op sa = a.superoperator(i);
        bool found = false;
        for (std::size_t j = 0; j < b.outcomes().size(); ++j) {
            if (matched[j] || !values_close(a.outcomes()[i].value, b.outcomes()[j].value)) continue;
            total += (sa - b.superoperator(j)).norm();
            matched[j] = true;
            found = true;
            break;
        }
        if (!found) total += sa.norm();
    }
    for (std::size_t j = 0; j < b.outcomes().size(); ++j)
        if (!matched[j]) total += b.superoperator(j).norm();
    return total;
}

}  // namespace qmtk
