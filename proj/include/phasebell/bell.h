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

#ifndef PHASEBELL_BELL_H
#define PHASEBELL_BELL_H

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>

#include "phasebell/phase_space.h"

namespace phasebell {

/// Quadrature angle of a Sign[cos(t) x + sin(t) p] measurement.
struct MeasurementSetting {
    double angle = 0.0;
};

/// Alice's (theta1, theta2) and Bob's (phi1, phi2) transformation parameters.
struct TransformationSettings {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;

    bool operator==(const TransformationSettings &) const = default;
};

/// (0, pi/4, pi/8, -pi/8)
TransformationSettings paper_settings();

enum class EstimateMethod { kAnalytic, kMonteCarlo };

struct CorrelationEstimate {
    double value = 0.0;
    EstimateMethod method = EstimateMethod::kAnalytic;
    std::size_t n = 0;      ///< samples; 0 for analytic
    double std_error = 0.0;  ///< 0 for analytic
};

/// <Sign[x_theta]> for one Gaussian mode: erf(mu_theta / (sigma sqrt 2)).
double sign_expectation(const ModeGaussian &mode, MeasurementSetting m);

/// Exact <A B> for a Gaussian mixture; the sign integrand factorizes per component.
CorrelationEstimate correlation_analytic(const WignerMixture &w, MeasurementSetting a, MeasurementSetting b);

/// cos(2(theta_i - phi_j)) erf^2(alpha_r).
double correlation_paper(double theta_i, double phi_j, double alpha_r);

/// Minimum sample count accepted by correlation_mc.
inline constexpr std::size_t kMinMonteCarloSamples = 1000;

/// Mean of Sign[x1_a] Sign[x2_b] over `n` draws from `w`; a rotated coordinate
/// of exactly zero scores +1. Throws std::invalid_argument if n < 1000.
CorrelationEstimate correlation_mc(const WignerMixture &w, MeasurementSetting a, MeasurementSetting b,
                                   std::uint64_t seed, std::size_t n);

/// <AB>_11 + <AB>_12 + <AB>_21 - <AB>_22 with <AB>_ij = correlation_paper(theta_i, phi_j, alpha_r).
double chsh_transformed(const TransformationSettings &s, double alpha_r);

using SettingPair = std::array<MeasurementSetting, 2>;

/// CHSH on a single state with varying measurement angles; pairs are ordered
/// (A1,B1), (A1,B2), (A2,B1), (A2,B2).
double chsh_fixed_state(const WignerMixture &w, const std::array<SettingPair, 4> &pairs);

/// Root of 2 sqrt(2) erf^2(a) = 2, bisected on [0.5, 1.5] to width 1e-10.
double threshold_alpha();

struct ScanResult {
    TransformationSettings settings;
    double chsh = 0.0;
};

/// Grid search of chsh_transformed over [0, pi)^4 with step pi / resolution.
/// Ties (within 1e-12) resolve to the lexicographically smallest quadruple.
/// Throws std::invalid_argument if resolution < 8.
ScanResult scan_settings(double alpha_r, std::size_t resolution);

struct LhvReport {
    double d12 = 0.0;
    double d21 = 0.0;
    double d22 = 0.0;

    /// d12 and d21 vanish while d22 does not, so no identity map of the
    /// hidden variables can connect all four distributions.
    bool contradiction(double tolerance = 1e-12) const {
        return d12 <= tolerance && d21 <= tolerance && d22 > tolerance;
    }
};

/// Compares W_11 against W_12, W_21, W_22, each built from rho_target(theta_i, phi_j).
/// Propagates NonDiagonalState.
LhvReport lhv_identity_check(const TransformationSettings &s, std::complex<double> alpha, double variance,
                             const GridSpec &grid, SupDomain domain = SupDomain::kMarginalX);

}  // namespace phasebell

#endif
