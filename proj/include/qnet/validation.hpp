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

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "qnet/circuits.hpp"
#include "qnet/common.hpp"
#include "qnet/gaussian.hpp"

namespace qnet {

/// Sources on fresh modes followed by one interferometer on all modes.
struct RandomNetwork {
    std::size_t n_modes = 0;
    std::vector<SqueezerSource> squeezers;
    std::vector<CoherentSource> coherent;
    ComplexMatrix unitary;

    GaussianState gaussian_state() const;
};

struct RandomNetworkLimits {
    std::size_t min_modes = 2;
    std::size_t max_modes = 6;
    double max_squeezing = 0.25;
    double max_amplitude = 0.3;
};

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).
ComplexMatrix haar_unitary(std::mt19937_64& rng, std::size_t n);

RandomNetwork random_network(std::mt19937_64& rng, const RandomNetworkLimits& limits = {});

struct OracleComparison {
    std::size_t n_modes = 0;
    /// Largest |P_gaussian - P_fock| over all 2^n patterns.
    double max_deviation = 0.0;
    /// |sum of Gaussian pattern probabilities - 1|.
    double gaussian_sum_error = 0.0;
    double truncation_deficit = 0.0;
    double max_mean_photons = 0.0;
};

OracleComparison compare_with_oracle(const RandomNetwork& network, unsigned cutoff);

}  // namespace qnet
