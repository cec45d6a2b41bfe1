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

#ifndef PHASEBELL_PHASE_SPACE_H
#define PHASEBELL_PHASE_SPACE_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace phasebell {

/// A point (x, p) in the phase space of one bosonic mode.
struct PhasePoint {
    double x = 0.0;
    double p = 0.0;

    bool operator==(const PhasePoint &) const = default;
};

/// Isotropic Gaussian on one mode's phase plane; `variance` is per quadrature.
struct ModeGaussian {
    PhasePoint mean;
    double variance = 0.5;

    bool operator==(const ModeGaussian &) const = default;

    /// Normalized 2D density at `z`.
    double density(PhasePoint z) const;
};

/// One product term w * g(z1; mode1) * g(z2; mode2) of a two-mode mixture.
struct TwoModeComponent {
    double weight = 0.0;
    ModeGaussian mode1;
    ModeGaussian mode2;

    bool operator==(const TwoModeComponent &) const = default;
};

/// Rectangular grid, `steps` points per axis, endpoints included.
struct GridSpec {
    double min = -4.0;
    double max = 4.0;
    std::size_t steps = 101;

    /// Throws std::invalid_argument unless min < max and steps >= 2.
    void validate() const;
    double point(std::size_t i) const;
};

/// Builds the phase-space Gaussian of the coherent state |alpha>.
/// Throws std::invalid_argument for non-positive variance.
ModeGaussian coherent_mode(std::complex<double> alpha, double variance);

/// The (x1, x2) density left after integrating out both momenta.
class MarginalX {
   public:
    struct Term {
        double weight;
        double mean1;
        double variance1;
        double mean2;
        double variance2;
    };

    explicit MarginalX(std::vector<Term> terms) : terms_(std::move(terms)) {
    }

    double eval(double x1, double x2) const;
    const std::vector<Term> &terms() const {
        return terms_;
    }

   private:
    std::vector<Term> terms_;
};

/// A positive, normalized mixture of two-mode Gaussian products.
///
/// Weights must be non-negative and sum to one within 1e-12. Components whose
/// weight falls below 1e-15 are dropped and the rest renormalized, so every
/// stored component carries a strictly positive weight.
class WignerMixture {
   public:
    explicit WignerMixture(std::vector<TwoModeComponent> components);

    const std::vector<TwoModeComponent> &components() const {
        return components_;
    }

    double eval(PhasePoint z1, PhasePoint z2) const;
    MarginalX marginal_x() const;

   private:
    std::vector<TwoModeComponent> components_;
};

using PhaseSample = std::pair<PhasePoint, PhasePoint>;

/// Samples are generated in fixed-size chunks, each driven by its own engine
/// seeded from (seed, chunk index). Output therefore does not depend on how
/// many threads produce the chunks.
inline constexpr std::size_t kSampleChunkSize = std::size_t{1} << 16;

/// Fills `out` with the draws of chunk `chunk_index`. `out.size()` must not
/// exceed kSampleChunkSize; a short final chunk is a prefix of the full one.
void sample_chunk(const WignerMixture &w, std::uint64_t seed, std::size_t chunk_index, std::span<PhaseSample> out);

/// n i.i.d. draws (z1, z2) from the mixture; deterministic in (seed, n).
std::vector<PhaseSample> sample(const WignerMixture &w, std::uint64_t seed, std::size_t n);

enum class SupDomain {
    kMarginalX,  ///< grid over (x1, x2) of the momentum marginal
    kFull4d,     ///< grid over (x1, p1, x2, p2) of the full density
};

/// Largest |a - b| over the grid.
double sup_distance(const WignerMixture &a, const WignerMixture &b, const GridSpec &grid,
                    SupDomain domain = SupDomain::kMarginalX);

}  // namespace phasebell

#endif
