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

#include <vector>

#include "qnet/circuits.hpp"
#include "qnet/detection.hpp"

namespace qnet {

struct HeraldRate {
    double accept_probability = 0.0;
    double sift_probability = 0.0;
    double H_key = 0.0;
    double H_test = 0.0;
    double conditional_rate = 0.0;
    double bits_per_round = 0.0;
};

struct RateReport {
    double bits_per_round = 0.0;
    /// Secret bits per accepted, sifted round.
    double conditional_rate = 0.0;
    double accept_probability = 0.0;
    double sift_probability = 0.0;
    /// Averages weighted by accepted and sifted probability, in bits.
    double H_key = 0.0;
    double H_test = 0.0;
    std::vector<HeraldRate> per_herald;
};

/// H(X|Y) in bits for a joint table with X on rows. Entries must be
/// non-negative and sum to 1 within 1e-9.
double conditional_shannon_entropy(const RealMatrix& joint);

struct SiftedTable {
    RealMatrix table;  // k x k, normalized
    double probability = 0.0;
};

/// Keeps valid pairs whose outcomes share a k-block and pools the blocks.
SiftedTable subspace_sift(const JointDistribution& joint, std::size_t d, std::size_t k);

/// Renames Bob's outcome b to relabel[b]; the invalid outcome stays put.
JointDistribution relabel_bob(const JointDistribution& joint, const std::vector<std::size_t>& relabel);

/// Bob relabeling that aligns his outcomes with Alice's in the given basis,
/// derived from the herald's ideal state.
std::vector<std::size_t> outcome_relabeling(const HeraldPattern& herald, std::size_t k, Basis basis);

/// Key and test tables are in physical labels, one per herald, in the
/// herald order; relabeling happens here.
RateReport secret_key_rate(const std::vector<JointDistribution>& key, const std::vector<JointDistribution>& test,
                           const NetworkConfig& config, const std::vector<HeraldPattern>& heralds);

/// Full Gaussian pipeline: build both bases, herald search, joint tables,
/// rate.
RateReport evaluate_key_rate(const NetworkConfig& config);

}  // namespace qnet
