// Copyright 2026 The Phasebell Authors
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

#ifndef PHASEBELL_LOGICAL_MODEL_H
#define PHASEBELL_LOGICAL_MODEL_H

#include <Eigen/Dense>
#include <complex>
#include <set>
#include <stdexcept>
#include <vector>

#include "phasebell/phase_space.h"

namespace phasebell {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix16c = Eigen::Matrix<std::complex<double>, 16, 16>;

/// Tolerance for Hermiticity, trace, PSD and unitarity checks.
inline constexpr double kStateTolerance = 1e-12;

/// Raised when a state with logical coherences is asked for a positive
/// Gaussian-mixture Wigner representation.
class NonDiagonalState : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Density matrix of the two system modes over the logical basis
/// (|a,a>, |a,-a>, |-a,a>, |-a,-a>), where |a> and |-a> are treated as
/// orthonormal.
class LogicalState {
   public:
    /// Throws std::invalid_argument unless the matrix is Hermitian, has unit
    /// trace and no eigenvalue below -kStateTolerance.
    explicit LogicalState(const Matrix4c &matrix);

    const Matrix4c &matrix() const {
        return matrix_;
    }

   private:
    Matrix4c matrix_;
};

/// Density matrix over system1 (x) system2 (x) ancilla3 (x) ancilla4, factor 1
/// most significant. Same validity checks as LogicalState.
class JointState {
   public:
    explicit JointState(const Matrix16c &matrix);

    const Matrix16c &matrix() const {
        return matrix_;
    }

   private:
    Matrix16c matrix_;
};

/// Operator-sum representation of a single-mode channel on span{|a>, |-a>}.
class KrausChannel {
   public:
    /// Throws std::invalid_argument if sum E^dag E differs from I by more than
    /// kStateTolerance.
    explicit KrausChannel(std::vector<Matrix2c> operators);

    const std::vector<Matrix2c> &operators() const {
        return operators_;
    }

   private:
    std::vector<Matrix2c> operators_;
};

/// Unitary on (system qubit) (x) (ancilla qubit), basis (|a,0>, |a,1>, |-a,0>, |-a,1>).
class AncillaUnitary {
   public:
    explicit AncillaUnitary(const Matrix4c &matrix);

    const Matrix4c &matrix() const {
        return matrix_;
    }

   private:
    Matrix4c matrix_;
};

/// (|a,a><a,a| + |-a,-a><-a,-a|) / 2
LogicalState rho0();
/// (|a,-a><a,-a| + |-a,a><-a,a|) / 2
LogicalState rho1();
/// cos^2(theta - phi) rho0 + sin^2(theta - phi) rho1.
LogicalState rho_target(double theta, double phi);

/// Kraus pair {cos(theta) I, sin(theta) X} with X the logical bit flip.
KrausChannel bitflip_channel(double theta);
KrausChannel identity_channel();

/// sum_{mu,nu} (E_mu (x) F_nu) rho (E_mu (x) F_nu)^dag
LogicalState apply_local_channels(const LogicalState &state, const KrausChannel &alice, const KrausChannel &bob);

/// Trace distance between what independent bit-flip channels make of rho0
/// and the target rho_target(theta, phi).
double nogo_gap(double theta, double phi);

/// Alice's (or Bob's) system-ancilla rotation:
///
///     [ c  -s   0   0 ]
///     [ 0   0   s   c ]
///     [ 0   0   c  -s ]
///     [ s   c   0   0 ]
AncillaUnitary ancilla_unitary(double theta);

/// rho0 (x) |psi><psi| with |psi> = (|00> + |11>)/sqrt(2) on the ancillae.
JointState initial_joint_state();

/// Lifts a system-ancilla unitary to the 16-dimensional joint space, acting
/// on factors (system, ancilla) = (1, 3) when `party` is 0 and (2, 4) when 1.
Matrix16c embed_ancilla_unitary(const AncillaUnitary &u, int party);

/// Tr_34[ U13 U24 (rho0 (x) |psi><psi|) U24^dag U13^dag ] for arbitrary
/// unitaries; the standard protocol uses ancilla_unitary on both sides.
LogicalState ancilla_protocol(const AncillaUnitary &alice, const AncillaUnitary &bob);
LogicalState ancilla_protocol(double theta, double phi);

/// Reduces a joint state onto the factors in `keep` (1-based, from {1,2,3,4}).
/// Kept factors stay in ascending order. Throws std::invalid_argument for an
/// empty set or an index outside 1..4.
Eigen::MatrixXcd partial_trace(const JointState &state, const std::set<int> &keep);

/// Half the sum of absolute eigenvalues of a - b.
double trace_distance(const LogicalState &a, const LogicalState &b);
double trace_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

/// |<alpha|-alpha>|^2 = exp(-4|alpha|^2). Reported only; the logical algebra
/// treats the two states as orthogonal.
double logical_overlap(std::complex<double> alpha);

/// Positive Gaussian-mixture Wigner function of a logically diagonal state.
/// Logical label +alpha maps to mean (Re a, Im a), -alpha to its negation.
/// Throws NonDiagonalState if any off-diagonal entry exceeds 1e-10.
WignerMixture to_wigner(const LogicalState &state, std::complex<double> alpha, double variance);

}  // namespace phasebell

#endif
