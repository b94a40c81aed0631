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

#ifndef QMTK_MODELS_HPP
#define QMTK_MODELS_HPP

// Concrete measuring processes: the periodic-grid von Neumann and
// contractive-state position measurements, plus seeded random generators.

#include <cstdint>
#include <random>

#include "qmtk/instruments.hpp"

namespace qmtk {

/// Periodic position grid x_k = -L/2 + k L/N with momentum conjugate through
/// the unitary DFT, p = 2 pi hbar m / L for m in [-N/2, N/2).
class GridSpace {
  public:
    GridSpace(std::size_t n_points, double length, double hbar = 1.0);

    std::size_t n_points() const {
        return n_;
    }
    double length() const {
        return length_;
    }
    double hbar() const {
        return hbar_;
    }
    double spacing() const {
        return length_ / static_cast<double>(n_);
    }
    double x_value(std::size_t k) const;

    const Observable &x() const {
        return x_;
    }
    const Observable &p() const {
        return p_;
    }
    /// Unitary DFT F with p = F^dagger diag(p_m) F.
    const Op &dft() const {
        return dft_;
    }

    /// Cyclic shift |j> -> |j + shift mod N>, equal to exp(-i shift*dx p / hbar).
    Op translation(long shift) const;
    Ket translate(const Ket &psi, long shift) const;
    /// psi(x) -> psi(-x) about the grid origin (index N/2).
    Ket reflect(const Ket &psi) const;

    /// Normalized Gaussian with position standard deviation width.
    Ket gaussian(double center, double width, double momentum = 0.0) const;

    /// ||([x, p] - i hbar) psi|| / ||psi||.
    double commutator_defect(const Ket &psi) const;

  private:
    std::size_t n_;
    double length_;
    double hbar_;
    Observable x_;
    Observable p_;
    Op dft_;
};

/// I({x_k}) rho = K_k rho K_k^dagger with K_k = diag_j xi(x_j - x_k).
CpInstrument von_neumann_instrument(const GridSpace &grid, const Ket &xi);

/// I({x_k}) rho = <x_k|rho|x_k> |xi_k><xi_k| with xi_k the cyclic translate of
/// xi by x_k. The POVM is exactly the position spectral measure.
CpInstrument contractive_instrument(const GridSpace &grid, const Ket &xi);

/// Object (x) probe process on grid (x) grid with U|x, y> = |x, x + y> and
/// meter y. The probe is prepared in xi(-y), so instrument_of_process gives
/// von_neumann_instrument(grid, xi). Dimension N^2: keep N small.
MeasuringProcess von_neumann_process(const GridSpace &grid, const Ket &xi);

/// U|x, y> = |x - y, x> with meter y: x' = x - y, y' = x, so N(x) = 0
/// identically. Probe prepared in xi(-y); realizes contractive_instrument.
MeasuringProcess contractive_process(const GridSpace &grid, const Ket &xi);

// ---------------------------------------------------------------------------
// Random generators. All are deterministic functions of the generator state.

using Rng = std::mt19937_64;

/// Independent seed for trial `trial` of a run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

Op random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng &rng);
Op random_unitary(std::size_t dim, Rng &rng);
Op random_hermitian(std::size_t dim, Rng &rng);
Ket random_pure_state(std::size_t dim, Rng &rng);
DensityState random_density(std::size_t dim, std::size_t rank, Rng &rng);
Observable random_observable(std::size_t dim, Rng &rng);
/// Projection onto a random subspace of the given rank.
Op random_projection(std::size_t dim, std::size_t rank, Rng &rng);

MeasuringProcess random_measuring_process(std::size_t object_dim, std::size_t probe_dim, std::uint64_t seed);
CpInstrument random_cp_instrument(std::size_t dim, std::size_t n_outcomes, std::size_t kraus_per_outcome,
                                  std::uint64_t seed);
CpInstrument random_cp_instrument(std::size_t dim, std::size_t n_outcomes, std::size_t kraus_per_outcome, Rng &rng);

}  // namespace qmtk

#endif  // QMTK_MODELS_HPP
