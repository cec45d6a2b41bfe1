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

#include "phasebell/logical_model.h"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace phasebell {

namespace {

constexpr double kDiagonalTolerance = 1e-10;
constexpr int kFactors = 4;

template <typename M>
void check_density(const M &m, const char *what) {
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite entries");
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
    }
    if (std::abs(m.trace() - std::complex<double>(1.0)) > kStateTolerance) {
        throw std::invalid_argument(std::string(what) + ": trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<M> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kStateTolerance) {
        throw std::invalid_argument(std::string(what) + ": matrix has a negative eigenvalue");
    }
}

// Bit of the joint basis index holding factor f (1-based, factor 1 most significant).
int factor_shift(int f) {
    return kFactors - f;
}

Matrix2c bit_flip() {
    Matrix2c x;
    x << 0, 1, 1, 0;
    return x;
}

}  // namespace

LogicalState::LogicalState(const Matrix4c &matrix) : matrix_(matrix) {
    check_density(matrix_, "LogicalState");
}

JointState::JointState(const Matrix16c &matrix) : matrix_(matrix) {
    check_density(matrix_, "JointState");
}

KrausChannel::KrausChannel(std::vector<Matrix2c> operators) : operators_(std::move(operators)) {
    if (operators_.empty()) {
        throw std::invalid_argument("KrausChannel: no operators");
    }
    Matrix2c sum = Matrix2c::Zero();
    for (const auto &e : operators_) {
        sum += e.adjoint() * e;
    }
    if ((sum - Matrix2c::Identity()).cwiseAbs().maxCoeff() > kStateTolerance) {
        throw std::invalid_argument("KrausChannel: operators violate completeness");
    }
}

AncillaUnitary::AncillaUnitary(const Matrix4c &matrix) : matrix_(matrix) {
    if ((matrix_.adjoint() * matrix_ - Matrix4c::Identity()).cwiseAbs().maxCoeff() > kStateTolerance) {
        throw std::invalid_argument("AncillaUnitary: matrix is not unitary");
    }
}

LogicalState rho0() {
    return LogicalState(Eigen::Vector4cd(0.5, 0.0, 0.0, 0.5).asDiagonal().toDenseMatrix());
}

LogicalState rho1() {
    return LogicalState(Eigen::Vector4cd(0.0, 0.5, 0.5, 0.0).asDiagonal().toDenseMatrix());
}

LogicalState rho_target(double theta, double phi) {
    double c = std::cos(theta - phi);
    double s = std::sin(theta - phi);
    return LogicalState(c * c * rho0().matrix() + s * s * rho1().matrix());
}

KrausChannel bitflip_channel(double theta) {
    return KrausChannel({std::cos(theta) * Matrix2c::Identity(), std::sin(theta) * bit_flip()});
}

KrausChannel identity_channel() {
    return KrausChannel({Matrix2c::Identity()});
}

LogicalState apply_local_channels(const LogicalState &state, const KrausChannel &alice, const KrausChannel &bob) {
    Matrix4c out = Matrix4c::Zero();
    for (const auto &ea : alice.operators()) {
        for (const auto &eb : bob.operators()) {
            Matrix4c k = Eigen::kroneckerProduct(ea, eb);
            out += k * state.matrix() * k.adjoint();
        }
    }
    return LogicalState(out);
}

double nogo_gap(double theta, double phi) {
    LogicalState local = apply_local_channels(rho0(), bitflip_channel(theta), bitflip_channel(phi));
    return trace_distance(local, rho_target(theta, phi));
}

AncillaUnitary ancilla_unitary(double theta) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    Matrix4c u;
    u << c, -s, 0, 0,
         0, 0, s, c,
         0, 0, c, -s,
         s, c, 0, 0;
    return AncillaUnitary(u);
}

JointState initial_joint_state() {
    Eigen::Vector4cd psi(1.0, 0.0, 0.0, 1.0);
    psi /= std::sqrt(2.0);
    Matrix4c bell = psi * psi.adjoint();
    // Storage order (1,2,3,4) is exactly rho0 (x) bell.
    return JointState(Eigen::kroneckerProduct(rho0().matrix(), bell).eval());
}

Matrix16c embed_ancilla_unitary(const AncillaUnitary &u, int party) {
    if (party != 0 && party != 1) {
        throw std::invalid_argument("embed_ancilla_unitary: party must be 0 or 1");
    }
    int sys = factor_shift(party == 0 ? 1 : 2);
    int anc = factor_shift(party == 0 ? 3 : 4);
    int spectator_mask = ((1 << kFactors) - 1) & ~((1 << sys) | (1 << anc));
    Matrix16c out = Matrix16c::Zero();
    for (int r = 0; r < 16; r++) {
        for (int c = 0; c < 16; c++) {
            if ((r & spectator_mask) != (c & spectator_mask)) {
                continue;
            }
            int lr = (((r >> sys) & 1) << 1) | ((r >> anc) & 1);
            int lc = (((c >> sys) & 1) << 1) | ((c >> anc) & 1);
            out(r, c) = u.matrix()(lr, lc);
        }
    }
    return out;
}

LogicalState ancilla_protocol(const AncillaUnitary &alice, const AncillaUnitary &bob) {
    Matrix16c u = embed_ancilla_unitary(alice, 0) * embed_ancilla_unitary(bob, 1);
    JointState evolved(u * initial_joint_state().matrix() * u.adjoint());
    return LogicalState(partial_trace(evolved, {1, 2}));
}

LogicalState ancilla_protocol(double theta, double phi) {
    return ancilla_protocol(ancilla_unitary(theta), ancilla_unitary(phi));
}

Eigen::MatrixXcd partial_trace(const JointState &state, const std::set<int> &keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    std::vector<int> kept;
    std::vector<int> traced;
    for (int f = 1; f <= kFactors; f++) {
        (keep.contains(f) ? kept : traced).push_back(f);
    }
    if (kept.size() != keep.size()) {
        throw std::invalid_argument("partial_trace: factor index outside 1..4");
    }

    // Spread the bits of a reduced index onto the joint-index positions of `factors`.
    auto scatter = [](int bits, const std::vector<int> &factors) {
        int idx = 0;
        int n = static_cast<int>(factors.size());
        for (int k = 0; k < n; k++) {
            if ((bits >> (n - 1 - k)) & 1) {
                idx |= 1 << factor_shift(factors[k]);
            }
        }
        return idx;
    };

    int dk = 1 << kept.size();
    int dt = 1 << traced.size();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (int i = 0; i < dk; i++) {
        for (int j = 0; j < dk; j++) {
            std::complex<double> acc = 0.0;
            for (int t = 0; t < dt; t++) {
                int tb = scatter(t, traced);
                acc += state.matrix()(scatter(i, kept) | tb, scatter(j, kept) | tb);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

double trace_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw std::invalid_argument("trace_distance: shape mismatch");
    }
    Eigen::MatrixXcd d = a - b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const LogicalState &a, const LogicalState &b) {
    return trace_distance(Eigen::MatrixXcd(a.matrix()), Eigen::MatrixXcd(b.matrix()));
}

double logical_overlap(std::complex<double> alpha) {
    return std::exp(-4.0 * std::norm(alpha));
}

WignerMixture to_wigner(const LogicalState &state, std::complex<double> alpha, double variance) {
    const Matrix4c &m = state.matrix();
    for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++) {
            if (r != c && std::abs(m(r, c)) > kDiagonalTolerance) {
                throw NonDiagonalState("to_wigner: state has logical coherence at (" + std::to_string(r) + "," +
                                       std::to_string(c) + ")");
            }
        }
    }
    ModeGaussian plus = coherent_mode(alpha, variance);
    ModeGaussian minus = coherent_mode(-alpha, variance);
    std::vector<TwoModeComponent> comps;
    for (int k = 0; k < 4; k++) {
        double weight = m(k, k).real();
        if (weight <= 0.0) {
            continue;
        }
        // Index bit 1 labels mode 1, bit 0 labels mode 2; a set bit means -alpha.
        comps.push_back({weight, (k & 2) ? minus : plus, (k & 1) ? minus : plus});
    }
    return WignerMixture(std::move(comps));
}

}  // namespace phasebell
