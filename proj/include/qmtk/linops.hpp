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

#ifndef QMTK_LINOPS_HPP
#define QMTK_LINOPS_HPP

// Dense complex operator kernel shared by every other module.
//
// Conventions:
//   * Tensor products order the computational basis lexicographically with the
//     first factor most significant: |i>|j> has index i * d2 + j.
//   * Vectorization (used by superoperators) is column stacking:
//     vec(X)[r + c * d] = X(r, c), so vec(A X B) = (B^T kron A) vec(X).

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qmtk/error.hpp"

namespace qmtk {

using Complex = std::complex<double>;
using Op = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds used across the toolkit.
struct Tolerances {
    double herm = 1e-9;        // Hermiticity, idempotence, unitarity
    double trace = 1e-9;       // unit trace / trace preservation
    double psd = 1e-9;         // allowed negative eigenvalue
    double degeneracy = 1e-8;  // eigenvalue clustering
    double prob = 1e-12;       // posterior-state threshold
};

inline constexpr Tolerances kDefaultTolerances{};

enum class Subsystem { First, Second };

// ---------------------------------------------------------------------------
// Basic predicates and algebra

void require_square(const Op &x, const char *what);
void require_same_dim(const Op &a, const Op &b, const char *what);

bool is_hermitian(const Op &x, double tol = kDefaultTolerances.herm);
bool is_unitary(const Op &x, double tol = kDefaultTolerances.herm);
bool is_projection(const Op &x, double tol = kDefaultTolerances.herm);

Op identity(std::size_t dim);
Op kron(const Op &a, const Op &b);
Ket kron(const Ket &a, const Ket &b);
Op commutator(const Op &a, const Op &b);
Op ket_bra(const Ket &ket, const Ket &bra);
Op projector(const Ket &ket);
Op hermitian_part(const Op &x);

/// Partial trace of an operator on H1 (x) H2 keeping the given factor.
Op partial_trace(const Op &x, std::size_t d1, std::size_t d2, Subsystem keep);

/// Sum of singular values.
double trace_norm(const Op &x);
/// Largest singular value.
double operator_norm(const Op &x);

/// exp(i * scale * h) for Hermitian h.
Op exp_i_hermitian(const Op &h, double scale = 1.0);

/// Orthonormal basis (columns) of the column space of x; singular values at or
/// below tol are treated as zero.
Op range_basis(const Op &x, double tol = 1e-10);
/// Orthonormal basis (columns) of the null space of x.
Op null_basis(const Op &x, double tol = 1e-10);
/// Orthogonal projection onto the span of the orthonormal columns of basis.
Op projection_onto(const Op &basis, std::size_t dim);

Ket vec(const Op &x);
Op unvec(const Ket &v, std::size_t dim);

// ---------------------------------------------------------------------------
// Real sets

/// A Borel set restricted to what finite spectra can see: a finite list of
/// points, a list of half-open intervals [lo, hi), or the whole line.
class OutcomeSet {
  public:
    static OutcomeSet all();
    static OutcomeSet none();
    static OutcomeSet of(std::vector<double> points);
    static OutcomeSet interval(double lo, double hi);

    OutcomeSet &add_point(double x);
    OutcomeSet &add_interval(double lo, double hi);

    bool contains(double x) const;
    bool is_all() const {
        return all_;
    }

  private:
    bool all_ = false;
    std::vector<double> points_;
    std::vector<std::pair<double, double>> intervals_;
};

// ---------------------------------------------------------------------------
// Observables and states

struct SpectralComponent {
    double value;
    Op basis;  // dim x multiplicity, orthonormal columns spanning the eigenspace

    Op projection() const {
        return basis * basis.adjoint();
    }
};

/// Hermitian operator bundled with its spectral decomposition. Eigenvalues are
/// strictly increasing; each appears once with its full eigenprojection.
class Observable {
  public:
    Observable() = default;

    /// Spectral decomposition with eigenvalues merged by single-link
    /// clustering within degeneracy_tol.
    static Observable from_hermitian(const Op &h, double degeneracy_tol = kDefaultTolerances.degeneracy);

    /// sum_k values[k] * P_k for mutually orthogonal projections summing to I.
    static Observable from_spectrum(const std::vector<std::pair<double, Op>> &components);

    const Op &op() const {
        return op_;
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(op_.rows());
    }
    std::span<const SpectralComponent> spectrum() const {
        return spectrum_;
    }

    /// E^A(set).
    Op spectral_projection(const OutcomeSet &set) const;

    /// f(A) via the spectral decomposition; clustering is redone afterwards.
    template <class F>
    Observable map(F &&f) const {
        std::vector<std::pair<double, Op>> comps;
        comps.reserve(spectrum_.size());
        for (const auto &c : spectrum_) comps.emplace_back(f(c.value), c.projection());
        return from_spectrum(merge_equal(std::move(comps)));
    }

  private:
    static std::vector<std::pair<double, Op>> merge_equal(std::vector<std::pair<double, Op>> comps);

    Op op_;
    std::vector<SpectralComponent> spectrum_;
};

inline Observable spectral_decompose(const Op &h, double degeneracy_tol = kDefaultTolerances.degeneracy) {
    return Observable::from_hermitian(h, degeneracy_tol);
}

/// Positive unit-trace operator.
class DensityState {
  public:
    DensityState() = default;
    explicit DensityState(Op rho, const Tolerances &tol = kDefaultTolerances);

    static DensityState pure(const Ket &psi);
    static DensityState maximally_mixed(std::size_t dim);
    /// Normalizes a PSD operator by its trace (no positivity repair).
    static DensityState normalized(const Op &x);

    const Op &op() const {
        return op_;
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(op_.rows());
    }

  private:
    Op op_;
};

DensityState tensor(const DensityState &a, const DensityState &b);

/// 1/2 Tr|rho1 - rho2|.
double trace_distance(const DensityState &a, const DensityState &b);
double trace_distance(const Op &a, const Op &b);

double expectation(const Op &a, const DensityState &rho);  // Re Tr[A rho]
Complex trace_product(const Op &a, const Op &b);           // Tr[A B]
double standard_deviation(const Op &a, const DensityState &rho);

}  // namespace qmtk

#endif  // QMTK_LINOPS_HPP
