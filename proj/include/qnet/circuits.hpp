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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnet/common.hpp"
#include "qnet/gaussian.hpp"

namespace qnet {

enum class AncillaKind { WCS, TMS, HSPS, IdealOracle };
enum class Basis { Key, Test };

/// Bell-state-measurement interferometer family. Circulant is the working
/// Fourier multiport; PerLevel mixes each level separately and serves as a
/// deliberately broken reference (it cannot herald qutrit entanglement).
enum class BsmTopology { Circulant, PerLevel };

std::string_view to_string(AncillaKind kind);
std::string_view to_string(Basis basis);
std::string_view to_string(BsmTopology topology);
AncillaKind parse_ancilla_kind(std::string_view text);
Basis parse_basis(std::string_view text);
BsmTopology parse_topology(std::string_view text);

struct ConfigIssue {
    std::string field;
    std::string message;
};

struct NetworkConfig {
    int d = 2;
    int k = 2;
    AncillaKind ancilla = AncillaKind::TMS;
    double s = 0.1;
    double xi = 0.1;
    double alpha = 0.1;
    double theta = 0.0;
    Basis basis = Basis::Key;
    std::optional<double> eta;
    BsmTopology topology = BsmTopology::Circulant;

    /// Every violated constraint, tagged with the field it concerns.
    std::vector<ConfigIssue> issues() const;
    /// Throws ConfigError naming every offending field.
    void validate() const;

    int ancilla_photons() const { return d - 2; }
    /// xi for squeezed ancillas, alpha for WCS.
    double ancilla_parameter() const;
    void set_ancilla_parameter(double value);
};

struct NetworkLayout {
    std::size_t d = 0;
    std::size_t n_modes = 0;
    ModeList alice_signal;
    ModeList alice_idler;
    ModeList bob_signal;
    ModeList bob_idler;
    /// One list of d level modes per ancilla path.
    std::vector<ModeList> ancilla_paths;
    ModeList hsps_heralds;
    /// bsm_output[group][port]; d x d entries.
    std::vector<ModeList> bsm_output;

    /// BSM input modes, path-major: Alice, Bob, then ancilla paths.
    ModeList bsm_inputs() const;
    ModeList bsm_output_modes() const;
};

struct SqueezerSource {
    ModeIndex mode_a;
    ModeIndex mode_b;
    double s;
};

struct CoherentSource {
    ModeIndex mode;
    Complex alpha;
};

struct SinglePhotonSource {
    ModeIndex mode;
};

struct PassiveStage {
    std::string label;
    ComplexMatrix unitary;
    ModeList modes;
};

struct CompiledNetwork {
    NetworkConfig config;
    NetworkLayout layout;
    std::vector<SqueezerSource> squeezers;
    std::vector<CoherentSource> coherent;
    std::vector<SinglePhotonSource> photons;
    std::vector<PassiveStage> stages;
    /// Transmissivity applied to every idler mode; 1 means lossless.
    double idler_eta = 1.0;
    /// Gaussian part of the input (vacuum on single-photon modes).
    GaussianState input;
    /// BSM outputs, Alice idlers, Bob idlers, HSPS heralds.
    ModeList detector_modes;

    /// Input propagated through every stage. Rejects single-photon inputs.
    GaussianState output_state() const;
    /// All passive stages composed on the full mode space.
    ComplexMatrix full_unitary() const;
};

ComplexMatrix dft_matrix(std::size_t n);

/// exp(-i H theta) with H = sum_i |i><i+1 mod d| + h.c.
ComplexMatrix crosstalk_unitary(std::size_t d, double theta);
ComplexMatrix crosstalk_hamiltonian(std::size_t d);

/// Identity for Key; block-diagonal DFT_k for Test.
ComplexMatrix measurement_basis_unitary(std::size_t d, std::size_t k, Basis basis);

/// Path-space unitary W_0 of the circulant multiport (d x d).
ComplexMatrix circulant_zero_mode_block(std::size_t d);

/// BSM unitary over bsm_inputs() ordering; row s*d+i is output (s, i).
ComplexMatrix bsm_unitary(std::size_t d, BsmTopology topology);

NetworkLayout make_layout(const NetworkConfig& config);
CompiledNetwork build_network(const NetworkConfig& config);

}  // namespace qnet
