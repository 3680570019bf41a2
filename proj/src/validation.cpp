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

#include "qnet/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qnet/detection.hpp"
#include "qnet/fock.hpp"

namespace qnet {

GaussianState RandomNetwork::gaussian_state() const {
    GaussianState state = vacuum_state(n_modes);
    for (const auto& sq : squeezers) state = apply_two_mode_squeezer(state, sq.mode_a, sq.mode_b, sq.s);
    for (const auto& c : coherent) state = apply_displacement(state, c.mode, c.alpha);
    ModeList all(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) all[i] = i;
    return apply_interferometer(state, unitary, all);
}

ComplexMatrix haar_unitary(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix z(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) z(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

RandomNetwork random_network(std::mt19937_64& rng, const RandomNetworkLimits& limits) {
    std::uniform_int_distribution<std::size_t> mode_count(limits.min_modes, limits.max_modes);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RandomNetwork net;
    net.n_modes = mode_count(rng);
    // Pair leading modes into squeezers, then put coherent or vacuum inputs on
    // the rest.
    std::size_t mode = 0;
    const std::size_t pairs = std::uniform_int_distribution<std::size_t>(0, net.n_modes / 2)(rng);
    for (std::size_t p = 0; p < pairs; ++p, mode += 2)
        net.squeezers.push_back({mode, mode + 1, limits.max_squeezing * unit(rng)});
    for (; mode < net.n_modes; ++mode) {
        if (unit(rng) < 0.25) continue;
        const double r = limits.max_amplitude * unit(rng);
        net.coherent.push_back({mode, std::polar(r, 2.0 * std::numbers::pi * unit(rng))});
    }
    net.unitary = haar_unitary(rng, net.n_modes);
    return net;
}

OracleComparison compare_with_oracle(const RandomNetwork& network, unsigned cutoff) {
    OracleComparison out;
    out.n_modes = network.n_modes;
    const GaussianState state = network.gaussian_state();
    ModeList all(network.n_modes);
    for (std::size_t i = 0; i < network.n_modes; ++i) {
        all[i] = i;
        out.max_mean_photons = std::max(out.max_mean_photons, state.mean_photon_number(i));
    }
    const std::vector<double> gaussian = all_pattern_distribution(state, all);
    double total = 0.0;
    for (double p : gaussian) total += p;
    out.gaussian_sum_error = std::abs(total - 1.0);

    FockState fock = fock_sources(network.n_modes, network.squeezers, network.coherent, {}, cutoff, cutoff);
    fock = apply_fock_interferometer(fock, network.unitary, all);
    out.truncation_deficit = std::max(0.0, fock.truncation_deficit());
    std::vector<double> oracle(gaussian.size(), 0.0);
    for (const auto& [occ, amp] : fock.amplitudes) {
        std::size_t mask = 0;
        for (std::size_t i = 0; i < network.n_modes; ++i)
            if (occ[i] > 0) mask |= std::size_t{1} << i;
        oracle[mask] += std::norm(amp);
    }
    for (std::size_t m = 0; m < gaussian.size(); ++m)
        out.max_deviation = std::max(out.max_deviation, std::abs(gaussian[m] - oracle[m]));
    return out;
}

}  // namespace qnet
