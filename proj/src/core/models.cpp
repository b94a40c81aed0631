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

#include "qmtk/models.hpp"

#include <cmath>
#include <numbers>

namespace qmtk {

namespace {

std::size_t wrap(long i, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
}

void require_normalized(const Ket &xi, std::size_t n, const char *what) {
    if (static_cast<std::size_t>(xi.size()) != n) throw ShapeError(std::string(what) + ": wavefunction length");
    if (std::abs(xi.squaredNorm() - 1.0) > kDefaultTolerances.trace)
        throw InvalidStateError(std::string(what) + ": wavefunction is not normalized");
}

}  // namespace

GridSpace::GridSpace(std::size_t n_points, double length, double hbar) : n_(n_points), length_(length), hbar_(hbar) {
    if (n_ < 2 || (n_ & (n_ - 1)) != 0) throw DomainError("GridSpace: n_points must be a power of two >= 2");
    if (!(length_ > 0.0)) throw DomainError("GridSpace: length must be positive");
    if (!(hbar_ > 0.0)) throw DomainError("GridSpace: hbar must be positive");
    const auto n = static_cast<Eigen::Index>(n_);

    Op xop = Op::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) xop(k, k) = x_value(static_cast<std::size_t>(k));
    x_ = Observable::from_hermitian(xop);

    dft_.resize(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_));
    for (Eigen::Index q = 0; q < n; ++q)
        for (Eigen::Index k = 0; k < n; ++k)
            dft_(q, k) = std::polar(norm, -2.0 * std::numbers::pi * static_cast<double>((q * k) % n) /
                                              static_cast<double>(n));
    Eigen::VectorXcd pvals(n);
    for (Eigen::Index q = 0; q < n; ++q) {
        const long m = q < n / 2 ? q : q - n;
        pvals(q) = 2.0 * std::numbers::pi * hbar_ * static_cast<double>(m) / length_;
    }
    const Op pop = dft_.adjoint() * pvals.asDiagonal() * dft_;
    p_ = Observable::from_hermitian(hermitian_part(pop));
}

double GridSpace::x_value(std::size_t k) const {
    return -0.5 * length_ + static_cast<double>(k) * spacing();
}

Op GridSpace::translation(long shift) const {
    const auto n = static_cast<Eigen::Index>(n_);
    Op t = Op::Zero(n, n);
    for (std::size_t j = 0; j < n_; ++j)
        t(static_cast<Eigen::Index>(wrap(static_cast<long>(j) + shift, n_)), static_cast<Eigen::Index>(j)) = 1.0;
    return t;
}

Ket GridSpace::translate(const Ket &psi, long shift) const {
    Ket out(psi.size());
    for (std::size_t j = 0; j < n_; ++j)
        out(static_cast<Eigen::Index>(wrap(static_cast<long>(j) + shift, n_))) = psi(static_cast<Eigen::Index>(j));
    return out;
}

Ket GridSpace::reflect(const Ket &psi) const {
    Ket out(psi.size());
    for (std::size_t j = 0; j < n_; ++j)
        out(static_cast<Eigen::Index>(j)) = psi(static_cast<Eigen::Index>(wrap(static_cast<long>(n_ - j), n_)));
    return out;
}

Ket GridSpace::gaussian(double center, double width, double momentum) const {
    if (!(width > 0.0)) throw DomainError("GridSpace::gaussian: width must be positive");
    Ket psi(static_cast<Eigen::Index>(n_));
    for (std::size_t k = 0; k < n_; ++k) {
        const double x = x_value(k);
        const double envelope = std::exp(-(x - center) * (x - center) / (4.0 * width * width));
        psi(static_cast<Eigen::Index>(k)) = std::polar(envelope, momentum * x / hbar_);
    }
    return psi / psi.norm();
}

double GridSpace::commutator_defect(const Ket &psi) const {
    const Ket c = x_.op() * (p_.op() * psi) - p_.op() * (x_.op() * psi);
    return (c - Complex(0.0, hbar_) * psi).norm() / psi.norm();
}

// ---------------------------------------------------------------------------

CpInstrument von_neumann_instrument(const GridSpace &grid, const Ket &xi) {
    const std::size_t n = grid.n_points();
    require_normalized(xi, n, "von_neumann_instrument");
    const auto half = static_cast<long>(n / 2);
    std::vector<KrausOutcome> outcomes;
    outcomes.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Op kr = Op::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) {
            // x_j - x_k sits at grid index j - k + N/2.
            const std::size_t idx = wrap(static_cast<long>(j) - static_cast<long>(k) + half, n);
            kr(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = xi(static_cast<Eigen::Index>(idx));
        }
        outcomes.push_back({grid.x_value(k), {std::move(kr)}});
    }
    return CpInstrument(std::move(outcomes));
}

CpInstrument contractive_instrument(const GridSpace &grid, const Ket &xi) {
    const std::size_t n = grid.n_points();
    require_normalized(xi, n, "contractive_instrument");
    const auto half = static_cast<long>(n / 2);
    std::vector<KrausOutcome> outcomes;
    outcomes.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Op kr = Op::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        kr.col(static_cast<Eigen::Index>(k)) = grid.translate(xi, static_cast<long>(k) - half);
        outcomes.push_back({grid.x_value(k), {std::move(kr)}});
    }
    return CpInstrument(std::move(outcomes));
}

namespace {

MeasuringProcess grid_permutation_process(const GridSpace &grid, const Ket &xi, bool contractive) {
    const std::size_t n = grid.n_points();
    const auto half = static_cast<long>(n / 2);
    const auto total = static_cast<Eigen::Index>(n * n);
    Op u = Op::Zero(total, total);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto la = static_cast<long>(a);
            const auto lb = static_cast<long>(b);
            std::size_t out_obj, out_probe;
            if (contractive) {
                out_obj = wrap(la - lb + half, n);  // x - y
                out_probe = a;                      // x
            } else {
                out_obj = a;                          // x
                out_probe = wrap(la + lb - half, n);  // x + y
            }
            u(static_cast<Eigen::Index>(out_obj * n + out_probe), static_cast<Eigen::Index>(a * n + b)) = 1.0;
        }
    return MeasuringProcess(n, DensityState::pure(grid.reflect(xi)), std::move(u), grid.x());
}

}  // namespace

MeasuringProcess von_neumann_process(const GridSpace &grid, const Ket &xi) {
    require_normalized(xi, grid.n_points(), "von_neumann_process");
    return grid_permutation_process(grid, xi, false);
}

MeasuringProcess contractive_process(const GridSpace &grid, const Ket &xi) {
    require_normalized(xi, grid.n_points(), "contractive_process");
    return grid_permutation_process(grid, xi, true);
}

// ---------------------------------------------------------------------------

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    // splitmix64 over a combination of both inputs
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + trial + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Op random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Op g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    return g;
}

Op random_unitary(std::size_t dim, Rng &rng) {
    const Op g = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<Op> qr(g);
    Op q = qr.householderQ();
    const Op r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases of R's diagonal so Q is Haar distributed.
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const Complex d = r(k, k);
        if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
    }
    return q;
}

Op random_hermitian(std::size_t dim, Rng &rng) {
    const Op g = random_gaussian_matrix(dim, dim, rng);
    return 0.5 * (g + g.adjoint());
}

Ket random_pure_state(std::size_t dim, Rng &rng) {
    const Op g = random_gaussian_matrix(dim, 1, rng);
    return g.col(0) / g.col(0).norm();
}

DensityState random_density(std::size_t dim, std::size_t rank, Rng &rng) {
    if (rank == 0 || rank > dim) throw DomainError("random_density: rank must be in [1, dim]");
    const Op g = random_gaussian_matrix(dim, rank, rng);
    const Op rho = g * g.adjoint();
    return DensityState(hermitian_part(rho / rho.trace().real()));
}

Observable random_observable(std::size_t dim, Rng &rng) {
    return Observable::from_hermitian(random_hermitian(dim, rng));
}

Op random_projection(std::size_t dim, std::size_t rank, Rng &rng) {
    if (rank > dim) throw DomainError("random_projection: rank exceeds dimension");
    const Op u = random_unitary(dim, rng);
    const Op v = u.leftCols(static_cast<Eigen::Index>(rank));
    return v * v.adjoint();
}

MeasuringProcess random_measuring_process(std::size_t object_dim, std::size_t probe_dim, std::uint64_t seed) {
    if (object_dim < 2 || probe_dim < 2) throw DomainError("random_measuring_process: dimensions must be >= 2");
    Rng rng(seed);
    Op u = random_unitary(object_dim * probe_dim, rng);
    const Ket f = random_pure_state(probe_dim, rng);
    Observable meter = random_observable(probe_dim, rng);
    return MeasuringProcess(object_dim, DensityState::pure(f), std::move(u), std::move(meter));
}

CpInstrument random_cp_instrument(std::size_t dim, std::size_t n_outcomes, std::size_t kraus_per_outcome, Rng &rng) {
    if (dim < 2 || n_outcomes == 0 || kraus_per_outcome == 0)
        throw DomainError("random_cp_instrument: need dim >= 2 and at least one outcome and Kraus operator");
    const std::size_t blocks = n_outcomes * kraus_per_outcome;
    const Op g = random_gaussian_matrix(blocks * dim, dim, rng);
    Eigen::HouseholderQR<Op> qr(g);
    const Op iso = qr.householderQ() * Op::Identity(g.rows(), g.cols());

    std::uniform_real_distribution<double> uniform(-3.0, 3.0);
    std::vector<double> values;
    while (values.size() < n_outcomes) {
        const double v = uniform(rng);
        bool distinct = true;
        for (double w : values) distinct = distinct && std::abs(v - w) > 1e-3;
        if (distinct) values.push_back(v);
    }

    const auto d = static_cast<Eigen::Index>(dim);
    std::vector<KrausOutcome> outcomes;
    for (std::size_t i = 0; i < n_outcomes; ++i) {
        KrausOutcome o{values[i], {}};
        for (std::size_t k = 0; k < kraus_per_outcome; ++k)
            o.kraus.push_back(iso.middleRows(static_cast<Eigen::Index>(i * kraus_per_outcome + k) * d, d));
        outcomes.push_back(std::move(o));
    }
    return CpInstrument(std::move(outcomes));
}

CpInstrument random_cp_instrument(std::size_t dim, std::size_t n_outcomes, std::size_t kraus_per_outcome,
                                  std::uint64_t seed) {
    Rng rng(seed);
    return random_cp_instrument(dim, n_outcomes, kraus_per_outcome, rng);
}

}  // namespace qmtk
