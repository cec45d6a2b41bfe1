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

#include "phasebell/phase_space.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "parallel.h"

namespace phasebell {

namespace {

constexpr double kWeightSumTolerance = 1e-12;
constexpr double kPruneWeight = 1e-15;

double gauss1d(double x, double mean, double variance) {
    double d = x - mean;
    return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

void check_mode(const ModeGaussian &m) {
    if (!(m.variance > 0.0) || !std::isfinite(m.variance)) {
        throw std::invalid_argument("mode variance must be positive and finite");
    }
    if (!std::isfinite(m.mean.x) || !std::isfinite(m.mean.p)) {
        throw std::invalid_argument("mode mean must be finite");
    }
}

}  // namespace

double ModeGaussian::density(PhasePoint z) const {
    double dx = z.x - mean.x;
    double dp = z.p - mean.p;
    return std::exp(-(dx * dx + dp * dp) / (2.0 * variance)) / (2.0 * std::numbers::pi * variance);
}

void GridSpec::validate() const {
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
        throw std::invalid_argument("grid requires finite min < max");
    }
    if (steps < 2) {
        throw std::invalid_argument("grid requires at least 2 steps per axis");
    }
}

double GridSpec::point(std::size_t i) const {
    if (i + 1 == steps) {
        return max;
    }
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

ModeGaussian coherent_mode(std::complex<double> alpha, double variance) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("coherent_mode: variance must be positive, got " + std::to_string(variance));
    }
    ModeGaussian m{{alpha.real(), alpha.imag()}, variance};
    check_mode(m);
    return m;
}

double MarginalX::eval(double x1, double x2) const {
    double total = 0.0;
    for (const auto &t : terms_) {
        total += t.weight * gauss1d(x1, t.mean1, t.variance1) * gauss1d(x2, t.mean2, t.variance2);
    }
    return total;
}

WignerMixture::WignerMixture(std::vector<TwoModeComponent> components) {
    double sum = 0.0;
    for (const auto &c : components) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
            throw std::invalid_argument("mixture weights must be finite and non-negative");
        }
        check_mode(c.mode1);
        check_mode(c.mode2);
        sum += c.weight;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        throw std::invalid_argument("mixture weights sum to " + std::to_string(sum) + ", expected 1");
    }
    std::erase_if(components, [](const TwoModeComponent &c) { return c.weight < kPruneWeight; });
    double kept = 0.0;
    for (const auto &c : components) {
        kept += c.weight;
    }
    for (auto &c : components) {
        c.weight /= kept;
    }
    components_ = std::move(components);
}

double WignerMixture::eval(PhasePoint z1, PhasePoint z2) const {
    double total = 0.0;
    for (const auto &c : components_) {
        total += c.weight * c.mode1.density(z1) * c.mode2.density(z2);
    }
    return total;
}

MarginalX WignerMixture::marginal_x() const {
    std::vector<MarginalX::Term> terms;
    terms.reserve(components_.size());
    for (const auto &c : components_) {
        terms.push_back({c.weight, c.mode1.mean.x, c.mode1.variance, c.mode2.mean.x, c.mode2.variance});
    }
    return MarginalX(std::move(terms));
}

void sample_chunk(const WignerMixture &w, std::uint64_t seed, std::size_t chunk_index, std::span<PhaseSample> out) {
    if (out.size() > kSampleChunkSize) {
        throw std::invalid_argument("sample_chunk: chunk larger than kSampleChunkSize");
    }
    const auto &comps = w.components();
    std::vector<double> cumulative;
    std::vector<std::pair<double, double>> sd;
    cumulative.reserve(comps.size());
    sd.reserve(comps.size());
    double acc = 0.0;
    for (const auto &c : comps) {
        acc += c.weight;
        cumulative.push_back(acc);
        sd.emplace_back(std::sqrt(c.mode1.variance), std::sqrt(c.mode2.variance));
    }
    const std::size_t last = comps.size() - 1;

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk_index), static_cast<std::uint32_t>(chunk_index >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> pick(0.0, acc);
    std::normal_distribution<double> normal;

    for (auto &s : out) {
        std::size_t k = 0;
        if (last > 0) {
            double u = pick(rng);
            while (k < last && u >= cumulative[k]) {
                k++;
            }
        }
        const auto &c = comps[k];
        s.first.x = c.mode1.mean.x + sd[k].first * normal(rng);
        s.first.p = c.mode1.mean.p + sd[k].first * normal(rng);
        s.second.x = c.mode2.mean.x + sd[k].second * normal(rng);
        s.second.p = c.mode2.mean.p + sd[k].second * normal(rng);
    }
}

std::vector<PhaseSample> sample(const WignerMixture &w, std::uint64_t seed, std::size_t n) {
    std::vector<PhaseSample> out(n);
    std::size_t chunks = (n + kSampleChunkSize - 1) / kSampleChunkSize;
    detail::parallel_for(chunks, [&](std::size_t c) {
        std::size_t begin = c * kSampleChunkSize;
        std::size_t len = std::min(kSampleChunkSize, n - begin);
        sample_chunk(w, seed, c, std::span<PhaseSample>(out).subspan(begin, len));
    });
    return out;
}

double sup_distance(const WignerMixture &a, const WignerMixture &b, const GridSpec &grid, SupDomain domain) {
    grid.validate();
    std::vector<double> axis(grid.steps);
    for (std::size_t i = 0; i < grid.steps; i++) {
        axis[i] = grid.point(i);
    }
    double best = 0.0;
    if (domain == SupDomain::kMarginalX) {
        MarginalX ma = a.marginal_x();
        MarginalX mb = b.marginal_x();
        for (double x1 : axis) {
            for (double x2 : axis) {
                best = std::max(best, std::abs(ma.eval(x1, x2) - mb.eval(x1, x2)));
            }
        }
        return best;
    }
    for (double x1 : axis) {
        for (double p1 : axis) {
            for (double x2 : axis) {
                for (double p2 : axis) {
                    PhasePoint z1{x1, p1};
                    PhasePoint z2{x2, p2};
                    best = std::max(best, std::abs(a.eval(z1, z2) - b.eval(z1, z2)));
                }
            }
        }
    }
    return best;
}

}  // namespace phasebell
