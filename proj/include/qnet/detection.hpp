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
#include <vector>

#include "qnet/circuits.hpp"
#include "qnet/common.hpp"
#include "qnet/gaussian.hpp"
#include "qnet/herald.hpp"

namespace qnet {

inline constexpr std::size_t kMaxEnumeratedDetectors = 22;
inline constexpr double kDefaultHeraldThreshold = 1.0 - 1e-6;
inline constexpr double kNegativeProbabilityTolerance = 1e-9;

/// exp(-delta^T (V+I)^{-1} delta / 2) / sqrt(det((V+I)/2)) on the subset.
double vacuum_probability(const GaussianState& state, std::span<const ModeIndex> subset);

/// Probability that every `clicked` mode fires and every `silent` mode stays
/// dark, marginalized over all other modes. Inclusion-exclusion over the
/// clicked set, evaluated on the Schur complement that conditions on the
/// silent set.
double click_probability(const GaussianState& state, std::span<const ModeIndex> clicked,
                         std::span<const ModeIndex> silent);

/// Pattern over every mode of the state.
double click_pattern_probability(const GaussianState& state, const ClickPattern& pattern);
/// Pattern over the listed detectors; other modes are marginalized.
double click_pattern_probability(const GaussianState& state, std::span<const ModeIndex> detectors,
                                 const ClickPattern& pattern);

/// Probability of every click pattern on the detectors, indexed by bitmask
/// (bit i set = detectors[i] clicks).
std::vector<double> all_pattern_distribution(const GaussianState& state, std::span<const ModeIndex> detectors);

/// Every d-click BSM pattern with nonzero weight at ideal inputs, sorted by
/// decreasing fidelity. Cached per (d, topology).
std::vector<HeraldPattern> herald_candidates(const NetworkConfig& config);

/// Candidates whose fidelity reaches the threshold. Throws NumericalError if
/// none does.
std::vector<HeraldPattern> herald_search(const NetworkConfig& config,
                                         double fidelity_threshold = kDefaultHeraldThreshold);

/// User outcome table conditioned on a herald. Index d is the invalid outcome
/// (zero or several clicks among that user's idler detectors).
struct JointDistribution {
    std::size_t dim = 0;
    RealMatrix table;
    double accept_probability = 0.0;

    std::size_t invalid() const { return dim; }
};

JointDistribution joint_outcome_distribution(const CompiledNetwork& net, const HeraldPattern& herald);
JointDistribution joint_outcome_distribution(const CompiledNetwork& net, const GaussianState& output,
                                             const HeraldPattern& herald);

}  // namespace qnet
