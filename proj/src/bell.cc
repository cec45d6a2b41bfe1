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

#include "phasebell/bell.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "parallel.h"
#include "phasebell/logical_model.h"

namespace phasebell {

namespace {

constexpr double kPi = std::numbers::pi;

double rotated(PhasePoint z, double angle) {
    return std::cos(angle) * z.x + std::sin(angle) * z.p;
}

int sign_of(double v) {
    return v >= 0.0 ? 1 : -1;
}

}  // namespace

TransformationSettings paper_settings() {
    return {0.0, kPi / 4, kPi / 8, -kPi / 8};
}

double sign_expectation(const ModeGaussian &mode, MeasurementSetting m) {
    double mu = rotated(mode.mean, m.angle);
    return std::erf(mu / std::sqrt(2.0 * mode.variance));
}

CorrelationEstimate correlation_analytic(const WignerMixture &w, MeasurementSetting a, MeasurementSetting b) {
    double total = 0.0;
    for (const auto &c : w.components()) {
        total += c.weight * sign_expectation(c.mode1, a) * sign_expectation(c.mode2, b);
    }
    return {total, EstimateMethod::kAnalytic, 0, 0.0};
}

double correlation_paper(double theta_i, double phi_j, double alpha_r) {
    double e = std::erf(alpha_r);
    return std::cos(2.0 * (theta_i - phi_j)) * e * e;
}

CorrelationEstimate correlation_mc(const WignerMixture &w, MeasurementSetting a, MeasurementSetting b,
                                   std::uint64_t seed, std::size_t n) {
    if (n < kMinMonteCarloSamples) {
        throw std::invalid_argument("correlation_mc: need at least 1000 samples");
    }
    std::size_t chunks = (n + kSampleChunkSize - 1) / kSampleChunkSize;
    std::vector<long long> sums(chunks, 0);
    const double ca = std::cos(a.angle), sa = std::sin(a.angle);
    const double cb = std::cos(b.angle), sb = std::sin(b.angle);
    detail::parallel_for(chunks, [&](std::size_t c) {
        std::size_t len = std::min(kSampleChunkSize, n - c * kSampleChunkSize);
        std::vector<PhaseSample> buf(len);
        sample_chunk(w, seed, c, buf);
        long long s = 0;
        for (const auto &[z1, z2] : buf) {
            s += sign_of(ca * z1.x + sa * z1.p) * sign_of(cb * z2.x + sb * z2.p);
        }
        sums[c] = s;
    });
    long long total = 0;
    for (long long s : sums) {
        total += s;
    }
    double value = static_cast<double>(total) / static_cast<double>(n);
    double se = std::sqrt(std::max(0.0, 1.0 - value * value) / static_cast<double>(n));
    return {value, EstimateMethod::kMonteCarlo, n, se};
}

double chsh_transformed(const TransformationSettings &s, double alpha_r) {
    return correlation_paper(s.theta1, s.phi1, alpha_r) + correlation_paper(s.theta1, s.phi2, alpha_r) +
           correlation_paper(s.theta2, s.phi1, alpha_r) - correlation_paper(s.theta2, s.phi2, alpha_r);
}

double chsh_fixed_state(const WignerMixture &w, const std::array<SettingPair, 4> &pairs) {
    auto e = [&](std::size_t k) { return correlation_analytic(w, pairs[k][0], pairs[k][1]).value; };
    return e(0) + e(1) + e(2) - e(3);
}

double threshold_alpha() {
    auto f = [](double a) {
        double e = std::erf(a);
        return 2.0 * std::numbers::sqrt2 * e * e - 2.0;
    };
    double lo = 0.5;
    double hi = 1.5;
    while (hi - lo >= 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ScanResult scan_settings(double alpha_r, std::size_t resolution) {
    if (resolution < 8) {
        throw std::invalid_argument("scan_settings: resolution must be at least 8");
    }
    std::vector<double> axis(resolution);
    for (std::size_t i = 0; i < resolution; i++) {
        axis[i] = kPi * static_cast<double>(i) / static_cast<double>(resolution);
    }
    // Lexicographic order, strict improvement only: the first maximizer wins.
    ScanResult best{{axis[0], axis[0], axis[0], axis[0]}, -4.0};
    for (double t1 : axis) {
        for (double t2 : axis) {
            for (double p1 : axis) {
                for (double p2 : axis) {
                    TransformationSettings s{t1, t2, p1, p2};
                    double c = chsh_transformed(s, alpha_r);
                    if (c > best.chsh + 1e-12) {
                        best = {s, c};
                    }
                }
            }
        }
    }
    return best;
}

LhvReport lhv_identity_check(const TransformationSettings &s, std::complex<double> alpha, double variance,
                             const GridSpec &grid, SupDomain domain) {
    grid.validate();
    auto w = [&](double theta, double phi) { return to_wigner(rho_target(theta, phi), alpha, variance); };
    WignerMixture w11 = w(s.theta1, s.phi1);
    return {
        sup_distance(w11, w(s.theta1, s.phi2), grid, domain),
        sup_distance(w11, w(s.theta2, s.phi1), grid, domain),
        sup_distance(w11, w(s.theta2, s.phi2), grid, domain),
    };
}

}  // namespace phasebell
