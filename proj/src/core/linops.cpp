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

#include "qmtk/linops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmtk {

namespace {

std::string dims_str(const Op &x) {
    std::ostringstream os;
    os << x.rows() << "x" << x.cols();
    return os.str();
}

bool all_finite(const Op &x) {
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            if (!std::isfinite(x(i, j).real()) || !std::isfinite(x(i, j).imag())) return false;
    return true;
}

double point_tolerance(double p) {
    return 1e-9 * std::max(1.0, std::abs(p));
}

}  // namespace

void require_square(const Op &x, const char *what) {
    if (x.rows() != x.cols() || x.rows() == 0)
        throw ShapeError(std::string(what) + ": expected a non-empty square operator, got " + dims_str(x));
    if (!all_finite(x)) throw InvalidOperatorError(std::string(what) + ": operator has non-finite entries");
}

void require_same_dim(const Op &a, const Op &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError(std::string(what) + ": dimension mismatch " + dims_str(a) + " vs " + dims_str(b));
}

bool is_hermitian(const Op &x, double tol) {
    if (x.rows() != x.cols()) return false;
    return (x - x.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Op &x, double tol) {
    if (x.rows() != x.cols()) return false;
    return (x.adjoint() * x - Op::Identity(x.rows(), x.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_projection(const Op &x, double tol) {
    return is_hermitian(x, tol) && (x * x - x).cwiseAbs().maxCoeff() <= tol;
}

Op identity(std::size_t dim) {
    return Op::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Op kron(const Op &a, const Op &b) {
    Op out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Ket kron(const Ket &a, const Ket &b) {
    Ket out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Op commutator(const Op &a, const Op &b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

Op ket_bra(const Ket &ket, const Ket &bra) {
    return ket * bra.adjoint();
}

Op projector(const Ket &ket) {
    return ket * ket.adjoint();
}

Op hermitian_part(const Op &x) {
    return 0.5 * (x + x.adjoint());
}

Op partial_trace(const Op &x, std::size_t d1, std::size_t d2, Subsystem keep) {
    require_square(x, "partial_trace");
    const auto n1 = static_cast<Eigen::Index>(d1);
    const auto n2 = static_cast<Eigen::Index>(d2);
    if (d1 == 0 || d2 == 0 || x.rows() != n1 * n2) {
        std::ostringstream os;
        os << "partial_trace: operator of dimension " << x.rows() << " is not on a " << d1 << "x" << d2
           << " product space";
        throw ShapeError(os.str());
    }
    if (keep == Subsystem::First) {
        Op r = Op::Zero(n1, n1);
        for (Eigen::Index i = 0; i < n1; ++i)
            for (Eigen::Index j = 0; j < n1; ++j)
                r(i, j) = x.block(i * n2, j * n2, n2, n2).trace();
        return r;
    }
    Op r = Op::Zero(n2, n2);
    for (Eigen::Index k = 0; k < n1; ++k) r += x.block(k * n2, k * n2, n2, n2);
    return r;
}

double trace_norm(const Op &x) {
    Eigen::BDCSVD<Op> svd(x);
    return svd.singularValues().sum();
}

double operator_norm(const Op &x) {
    if (x.size() == 0) return 0.0;
    Eigen::BDCSVD<Op> svd(x);
    return svd.singularValues()(0);
}

Op exp_i_hermitian(const Op &h, double scale) {
    require_square(h, "exp_i_hermitian");
    if (!is_hermitian(h)) throw InvalidOperatorError("exp_i_hermitian: generator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(h));
    const auto &v = es.eigenvectors();
    Eigen::VectorXcd phases(v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k) phases(k) = std::polar(1.0, scale * es.eigenvalues()(k));
    return v * phases.asDiagonal() * v.adjoint();
}

Op range_basis(const Op &x, double tol) {
    if (x.cols() == 0) return Op(x.rows(), 0);
    Eigen::BDCSVD<Op> svd(x, Eigen::ComputeThinU);
    const auto &s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > tol) ++rank;
    return svd.matrixU().leftCols(rank);
}

Op null_basis(const Op &x, double tol) {
    if (x.rows() == 0) return Op::Identity(x.cols(), x.cols());
    Eigen::BDCSVD<Op> svd(x, Eigen::ComputeFullV);
    const auto &s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > tol) ++rank;
    return svd.matrixV().rightCols(x.cols() - rank);
}

Op projection_onto(const Op &basis, std::size_t dim) {
    if (basis.cols() == 0) return Op::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    return basis * basis.adjoint();
}

Ket vec(const Op &x) {
    Ket v(x.size());
    for (Eigen::Index c = 0; c < x.cols(); ++c)
        for (Eigen::Index r = 0; r < x.rows(); ++r) v(r + c * x.rows()) = x(r, c);
    return v;
}

Op unvec(const Ket &v, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (v.size() != d * d) throw ShapeError("unvec: vector length is not dim^2");
    Op x(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r) x(r, c) = v(r + c * d);
    return x;
}

// ---------------------------------------------------------------------------

OutcomeSet OutcomeSet::all() {
    OutcomeSet s;
    s.all_ = true;
    return s;
}

OutcomeSet OutcomeSet::none() {
    return OutcomeSet{};
}

OutcomeSet OutcomeSet::of(std::vector<double> points) {
    OutcomeSet s;
    s.points_ = std::move(points);
    return s;
}

OutcomeSet OutcomeSet::interval(double lo, double hi) {
    OutcomeSet s;
    s.intervals_.emplace_back(lo, hi);
    return s;
}

OutcomeSet &OutcomeSet::add_point(double x) {
    points_.push_back(x);
    return *this;
}

OutcomeSet &OutcomeSet::add_interval(double lo, double hi) {
    intervals_.emplace_back(lo, hi);
    return *this;
}

bool OutcomeSet::contains(double x) const {
    if (all_) return true;
    for (double p : points_)
        if (std::abs(x - p) <= point_tolerance(p)) return true;
    for (const auto &[lo, hi] : intervals_)
        if (x >= lo && x < hi) return true;
    return false;
}

// ---------------------------------------------------------------------------

Observable Observable::from_hermitian(const Op &h, double degeneracy_tol) {
    require_square(h, "spectral_decompose");
    if (!is_hermitian(h)) throw InvalidOperatorError("spectral_decompose: operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(h));
    const auto &evals = es.eigenvalues();
    const auto &evecs = es.eigenvectors();

    Observable out;
    out.op_ = h;
    Eigen::Index start = 0;
    const Eigen::Index n = evals.size();
    for (Eigen::Index k = 1; k <= n; ++k) {
        if (k < n && evals(k) - evals(k - 1) <= degeneracy_tol) continue;
        const Eigen::Index mult = k - start;
        SpectralComponent c;
        c.value = evals.segment(start, mult).mean();
        c.basis = evecs.middleCols(start, mult);
        out.spectrum_.push_back(std::move(c));
        start = k;
    }
    return out;
}

Observable Observable::from_spectrum(const std::vector<std::pair<double, Op>> &components) {
    if (components.empty()) throw InvalidOperatorError("Observable: empty spectrum");
    const Eigen::Index d = components.front().second.rows();
    std::vector<std::pair<double, Op>> sorted = components;
    std::sort(sorted.begin(), sorted.end(), [](const auto &a, const auto &b) { return a.first < b.first; });

    Observable out;
    out.op_ = Op::Zero(d, d);
    Op total = Op::Zero(d, d);
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const auto &[value, p] = sorted[k];
        require_square(p, "Observable::from_spectrum");
        if (p.rows() != d) throw ShapeError("Observable::from_spectrum: projection dimensions differ");
        if (!is_projection(p)) throw InvalidOperatorError("Observable::from_spectrum: component is not a projection");
        if (k > 0 && !(value > sorted[k - 1].first))
            throw InvalidOperatorError("Observable::from_spectrum: eigenvalues must be distinct");
        SpectralComponent c;
        c.value = value;
        c.basis = range_basis(hermitian_part(p), 0.5);
        const Op proj = c.projection();
        out.op_ += value * proj;
        total += proj;
        out.spectrum_.push_back(std::move(c));
    }
    if ((total - Op::Identity(d, d)).cwiseAbs().maxCoeff() > kDefaultTolerances.herm)
        throw InvalidOperatorError("Observable::from_spectrum: projections do not resolve the identity");
    return out;
}

std::vector<std::pair<double, Op>> Observable::merge_equal(std::vector<std::pair<double, Op>> comps) {
    std::sort(comps.begin(), comps.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<std::pair<double, Op>> merged;
    for (auto &c : comps) {
        if (!merged.empty() && std::abs(merged.back().first - c.first) <= point_tolerance(c.first))
            merged.back().second += c.second;
        else
            merged.push_back(std::move(c));
    }
    return merged;
}

Op Observable::spectral_projection(const OutcomeSet &set) const {
    Op p = Op::Zero(op_.rows(), op_.cols());
    for (const auto &c : spectrum_)
        if (set.contains(c.value)) p.noalias() += c.basis * c.basis.adjoint();
    return p;
}

// ---------------------------------------------------------------------------

DensityState::DensityState(Op rho, const Tolerances &tol) : op_(std::move(rho)) {
    require_square(op_, "DensityState");
    if (!is_hermitian(op_, tol.herm)) throw InvalidStateError("DensityState: operator is not Hermitian");
    const double tr = op_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) throw InvalidStateError("DensityState: trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(op_), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol.psd) throw InvalidStateError("DensityState: operator is not positive");
}

DensityState DensityState::pure(const Ket &psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw InvalidStateError("DensityState::pure: zero vector");
    const Ket u = psi / n;
    return DensityState(projector(u));
}

DensityState DensityState::maximally_mixed(std::size_t dim) {
    return DensityState(identity(dim) / static_cast<double>(dim));
}

DensityState DensityState::normalized(const Op &x) {
    const double tr = x.trace().real();
    if (!(tr > 0.0)) throw InvalidStateError("DensityState::normalized: non-positive trace");
    return DensityState(hermitian_part(x) / tr);
}

DensityState tensor(const DensityState &a, const DensityState &b) {
    return DensityState(kron(a.op(), b.op()));
}

double trace_distance(const Op &a, const Op &b) {
    require_same_dim(a, b, "trace_distance");
    return 0.5 * trace_norm(a - b);
}

double trace_distance(const DensityState &a, const DensityState &b) {
    return trace_distance(a.op(), b.op());
}

Complex trace_product(const Op &a, const Op &b) {
    require_same_dim(a, b, "trace_product");
    // Tr[AB] = sum_ij A_ij B_ji
    return (a.transpose().cwiseProduct(b)).sum();
}

double expectation(const Op &a, const DensityState &rho) {
    return trace_product(a, rho.op()).real();
}

double standard_deviation(const Op &a, const DensityState &rho) {
    const double m = expectation(a, rho);
    const double var = expectation(a * a, rho) - m * m;
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

}  // namespace qmtk
