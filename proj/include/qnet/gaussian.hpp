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

#include <span>

#include "qnet/common.hpp"

namespace qnet {

/**
 * Multimode Gaussian state in interleaved quadrature ordering
 * (x_1, p_1, ..., x_n, p_n).
 *
 * Conventions: the vacuum has identity covariance, and a coherent state with
 * amplitude alpha on a mode has mean quadratures (2 Re alpha, 2 Im alpha).
 *
 * The covariance is stored as its excess over the vacuum, V - I. Weak states
 * have an excess of order of the mean photon number, and keeping it separate
 * preserves its relative precision; click probabilities of weak multiphoton
 * events depend on exactly those digits.
 */
class GaussianState {
public:
    /// Validates symmetry (1e-12) and the uncertainty relation (-1e-9).
    GaussianState(const RealMatrix& covariance, RealVector displacement);

    /// Builds a state from V - I directly. Validated like the main constructor.
    static GaussianState from_excess(RealMatrix excess, RealVector displacement);

    std::size_t n_modes() const { return static_cast<std::size_t>(displacement_.size() / 2); }
    RealMatrix covariance() const;
    const RealMatrix& covariance_excess() const { return excess_; }
    const RealVector& displacement() const { return displacement_; }

    /// Total mean photon number, sum_i (V_ii - 1)/4 + delta_i^2/4.
    double mean_photon_number() const;
    double mean_photon_number(ModeIndex mode) const;

    /// Smallest eigenvalue of the Hermitian matrix V + i Omega.
    double uncertainty_margin() const;

private:
    struct Trusted {};
    GaussianState(RealMatrix excess, RealVector displacement, Trusted);
    void validate() const;

    friend GaussianState apply_two_mode_squeezer(const GaussianState&, ModeIndex, ModeIndex, double);
    friend GaussianState apply_displacement(const GaussianState&, ModeIndex, Complex);
    friend GaussianState apply_interferometer(const GaussianState&, const ComplexMatrix&,
                                              std::span<const ModeIndex>);
    friend GaussianState apply_loss(const GaussianState&, double, std::span<const ModeIndex>);
    friend GaussianState reduced_state(const GaussianState&, std::span<const ModeIndex>);
    friend GaussianState vacuum_state(std::size_t);

    RealMatrix excess_;
    RealVector displacement_;
};

/// Real 2n x 2n matrix with S Omega S^T = Omega.
struct SymplecticMatrix {
    RealMatrix matrix;

    std::size_t n_modes() const { return static_cast<std::size_t>(matrix.rows() / 2); }
    bool is_symplectic(double tol = 1e-10) const;
};

/// Interleaved symplectic form, diag([[0, 1], [-1, 0]], ...).
RealMatrix symplectic_form(std::size_t n_modes);

GaussianState vacuum_state(std::size_t n_modes);

/// Two-mode squeezer exp(s (a_i^dag a_j^dag - a_i a_j)). Negative s undoes a
/// previous squeeze.
GaussianState apply_two_mode_squeezer(const GaussianState& state, ModeIndex mode_i, ModeIndex mode_j,
                                      double s);

GaussianState apply_displacement(const GaussianState& state, ModeIndex mode, Complex alpha);

/// Orthogonal symplectic image of the passive map a -> U a.
SymplecticMatrix symplectic_from_unitary(const ComplexMatrix& unitary);

/// Applies U to the listed modes (in the listed order); identity elsewhere.
GaussianState apply_interferometer(const GaussianState& state, const ComplexMatrix& unitary,
                                   std::span<const ModeIndex> modes);

/// Pure-loss channel with transmissivity eta on every mode.
GaussianState apply_uniform_loss(const GaussianState& state, double eta);

/// Pure-loss channel on a subset of modes.
GaussianState apply_loss(const GaussianState& state, double eta, std::span<const ModeIndex> modes);

/// Marginal state on the listed modes, in the listed order.
GaussianState reduced_state(const GaussianState& state, std::span<const ModeIndex> modes);

bool is_unitary(const ComplexMatrix& matrix, double tol = 1e-10);

}  // namespace qnet
