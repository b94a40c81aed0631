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

#ifndef QMTK_TESTS_ORACLES_HPP
#define QMTK_TESTS_ORACLES_HPP

// Independent reference computations used by the tests. Written with plain
// loops so they share no code paths with the library.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline M pauli(char k) {
    M s = M::Zero(2, 2);
    if (k == 'x') {
        s(0, 1) = 1.0;
        s(1, 0) = 1.0;
    } else if (k == 'y') {
        s(0, 1) = C(0, -1);
        s(1, 0) = C(0, 1);
    } else if (k == 'z') {
        s(0, 0) = 1.0;
        s(1, 1) = -1.0;
    } else {
        s = M::Identity(2, 2);
    }
    return s;
}

inline M kron(const M &a, const M &b) {
    M out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// Tr_2 or Tr_1 of an operator on C^d1 (x) C^d2.
inline M trace_out_second(const M &x, Eigen::Index d1, Eigen::Index d2) {
    M out = M::Zero(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d1; ++j)
            for (Eigen::Index k = 0; k < d2; ++k) out(i, j) += x(i * d2 + k, j * d2 + k);
    return out;
}

inline M trace_out_first(const M &x, Eigen::Index d1, Eigen::Index d2) {
    M out = M::Zero(d2, d2);
    for (Eigen::Index i = 0; i < d2; ++i)
        for (Eigen::Index j = 0; j < d2; ++j)
            for (Eigen::Index k = 0; k < d1; ++k) out(i, j) += x(k * d2 + i, k * d2 + j);
    return out;
}

inline double min_eigenvalue(const M &h) {
    Eigen::SelfAdjointEigenSolver<M> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double half_trace_norm_hermitian(const M &h) {
    Eigen::SelfAdjointEigenSolver<M> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Unnormalized Choi matrix sum_ij |i><j| (x) Phi(|i><j|) of a map given as a
// callable on d x d matrices.
template <class F>
M choi(F &&phi, Eigen::Index d) {
    M out = M::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            M eij = M::Zero(d, d);
            eij(i, j) = 1.0;
            const M img = phi(eij);
            for (Eigen::Index a = 0; a < d; ++a)
                for (Eigen::Index b = 0; b < d; ++b) out(i * d + a, j * d + b) += img(a, b);
        }
    return out;
}

// <N^2> in rho (x) rho0 with N = U^dagger (1 (x) M) U - A (x) 1.
inline double rms_noise_direct(const M &u, const M &meter, const M &a, const M &rho, const M &rho0) {
    const Eigen::Index d = a.rows(), m = meter.rows();
    const M n = u.adjoint() * kron(M::Identity(d, d), meter) * u - kron(a, M::Identity(m, m));
    return std::sqrt(std::max(0.0, (n * n * kron(rho, rho0)).trace().real()));
}

inline double rms_disturbance_direct(const M &u, const M &b, const M &rho, const M &rho0) {
    const Eigen::Index m = rho0.rows();
    const M bb = kron(b, M::Identity(m, m));
    const M dd = u.adjoint() * bb * u - bb;
    return std::sqrt(std::max(0.0, (dd * dd * kron(rho, rho0)).trace().real()));
}

inline double sdev(const M &a, const M &rho) {
    const double m1 = (a * rho).trace().real(), m2 = (a * a * rho).trace().real();
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

}  // namespace oracle

#endif  // QMTK_TESTS_ORACLES_HPP
