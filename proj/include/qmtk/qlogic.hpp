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

#ifndef QMTK_QLOGIC_HPP
#define QMTK_QLOGIC_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmtk/linops.hpp"

namespace qmtk {

/// Orthogonal projection.
class Projection {
  public:
    explicit Projection(Op p, const Tolerances &tol = kDefaultTolerances);
    /// Projection onto the span of the orthonormal columns of basis.
    static Projection onto(const Op &basis, std::size_t dim);
    static Projection zero(std::size_t dim);
    static Projection identity(std::size_t dim);

    const Op &op() const {
        return op_;
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(op_.rows());
    }
    std::size_t rank() const;
    /// Orthonormal basis of the range.
    Op basis() const;

  private:
    Op op_;
};

Projection complement(const Projection &p);
Projection meet(const Projection &p, const Projection &q);
Projection join(const Projection &p, const Projection &q);
/// p => q = p^perp v (p ^ q).
Projection sasaki(const Projection &p, const Projection &q);

struct LatticeOps {
    Projection meet, join, complement, sasaki;
};
LatticeOps lattice_ops(const Projection &p, const Projection &q);

/// Observational proposition: atoms A in D, equalities A = B, and the
/// connectives not, and, or, implies.
class Proposition {
  public:
    static Proposition atom(Observable a, OutcomeSet set);
    static Proposition equal(Observable a, Observable b);
    static Proposition negation(Proposition p);
    static Proposition conjunction(Proposition p, Proposition q);
    static Proposition disjunction(Proposition p, Proposition q);
    static Proposition implication(Proposition p, Proposition q);

    struct Atom {
        Observable obs;
        OutcomeSet set;
    };
    struct Equal {
        Observable a, b;
    };
    enum class Connective { Not, And, Or, Implies };
    struct Compound {
        Connective op;
        std::vector<Proposition> args;
    };
    using Node = std::variant<Atom, Equal, Compound>;

    const Node &node() const {
        return *node_;
    }
    /// Dimension shared by every observable in the tree.
    std::size_t dim() const;

  private:
    explicit Proposition(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    std::shared_ptr<const Node> node_;
};

Projection truth_value(const Proposition &phi);
/// Tr[[[phi]] rho].
double probability(const Proposition &phi, const DensityState &rho);

/// ||[P_i, Q_j] rho|| <= tol for all spectral projections.
bool commuting_in_state(const Observable &a, const Observable &b, const DensityState &rho, double tol = 1e-10);

struct JointEntry {
    double a, b, prob;
};

struct JointDistribution {
    std::vector<JointEntry> entries;  // every eigenvalue pair, A-major
    double diagonal_mass() const;     // mu({a = b})
};

/// mu(a_i, b_j) = Tr[P_i Q_j rho]. Throws UndefinedJointDistributionError
/// when A and B do not commute in rho.
JointDistribution joint_distribution(const Observable &a, const Observable &b, const DensityState &rho);

bool identical_correlation(const Observable &a, const Observable &b, const DensityState &rho);

/// Largest subspace of ker(A - B) invariant under A and B.
Projection identical_correlation_projection(const Observable &a, const Observable &b);

/// Smallest subspace invariant under A (and B) containing range(rho).
Projection min_invariant_subspace(const Observable &a, const DensityState &rho);
Projection min_invariant_subspace(const Observable &a, const Observable &b, const DensityState &rho);

/// POVM on R^2; the label maps are the coordinate projections.
struct JointOutcome {
    double x, y;
    Op effect;
};
struct JointPovm {
    std::vector<JointOutcome> outcomes;
};

enum class Verdict { Measurable, NotMeasurable, Unknown };

struct SimultaneityResult {
    Verdict verdict;
    std::optional<JointPovm> certificate;
    std::string reason;
};

/// Checks a witness against the marginal conditions on C(A, rho), C(B, rho)
/// and the disjoint-support condition; without a witness, tries to build one
/// from commuting extensions of A or B.
SimultaneityResult is_simultaneously_measurable(const Observable &a, const Observable &b, const DensityState &rho,
                                                const JointPovm *witness = nullptr);

}  // namespace qmtk

#endif  // QMTK_QLOGIC_HPP
