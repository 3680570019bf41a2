/*
 * Copyright 2026 The qnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "qnet/circuits.hpp"
#include "qnet/common.hpp"
#include "qnet/herald.hpp"

namespace qnet {

/// Occupation numbers of up to 32 modes, 4 bits per mode.
class Occupation {
public:
    static constexpr std::size_t kMaxModes = 32;
    static constexpr unsigned kMaxPerMode = 15;

    unsigned operator[](std::size_t mode) const {
        return static_cast<unsigned>((words_[mode / 16] >> (4 * (mode % 16))) & 0xFu);
    }
    void set(std::size_t mode, unsigned n) {
        const unsigned shift = 4 * (mode % 16);
        auto& w = words_[mode / 16];
        w = (w & ~(std::uint64_t{0xF} << shift)) | (std::uint64_t{n} << shift);
    }
    bool operator==(const Occupation&) const = default;
    std::size_t hash() const {
        return std::hash<std::uint64_t>{}(words_[0] * 0x9E3779B97F4A7C15ull ^ words_[1]);
    }

private:
    std::array<std::uint64_t, 2> words_{};
};

struct OccupationHash {
    std::size_t operator()(const Occupation& o) const { return o.hash(); }
};

using AmplitudeMap = std::unordered_map<Occupation, Complex, OccupationHash>;

/// Truncated Fock-space pure state. Terms above the per-mode cutoff or the
/// total photon bound are dropped, so the norm can only shrink.
struct FockState {
    std::size_t n_modes = 0;
    unsigned cutoff = 0;
    unsigned photon_bound = 0;
    AmplitudeMap amplitudes;

    double norm_squared() const;
    /// 1 - norm^2: an upper bound on the probability lost to truncation when
    /// the cutoff is at least the photon bound.
    double truncation_deficit() const { return 1.0 - norm_squared(); }
};

FockState fock_vacuum(std::size_t n_modes, unsigned cutoff, unsigned photon_bound);

/// Product of squeezers, coherent states and single photons on fresh modes.
FockState fock_sources(std::size_t n_modes, std::span<const SqueezerSource> squeezers,
                       std::span<const CoherentSource> coherent, std::span<const SinglePhotonSource> photons,
                       unsigned cutoff, unsigned photon_bound);

/// Passive map a -> U a on the listed modes via a two-mode Givens
/// factorization of U.
FockState apply_fock_interferometer(const FockState& state, const ComplexMatrix& unitary,
                                    std::span<const ModeIndex> modes);

/// Default total photon bound, 2d + 2.
unsigned default_photon_bound(std::size_t d);

/// Sources and every passive stage of the network. Lossy networks are
/// rejected.
FockState fock_expand(const CompiledNetwork& net, unsigned cutoff, unsigned photon_bound);
FockState fock_expand(const CompiledNetwork& net, unsigned cutoff);

/// Pattern over all modes of the state.
double oracle_click_probability(const FockState& state, const ClickPattern& pattern);
/// Pattern over the listed detectors; other modes are marginalized.
double oracle_click_probability(const FockState& state, std::span<const ModeIndex> detectors,
                                const ClickPattern& pattern);

struct ConditionalState {
    ComplexMatrix rho;  // d^2 x d^2, index a*d + b
    double weight = 0.0;
};

/// Projects on the herald and exactly one photon per user idler group.
ConditionalState conditional_two_qudit_state(const FockState& state, const HeraldPattern& herald,
                                             const NetworkLayout& layout);

struct EntangledOverlap {
    double fidelity = 0.0;
    /// Bob level paired with Alice level m.
    std::vector<std::size_t> permutation;
    std::vector<double> phases;
};

EntangledOverlap best_entangled_overlap(const ComplexMatrix& rho, std::size_t d);
double entangled_fidelity(const ComplexMatrix& rho, std::size_t d);

}  // namespace qnet
