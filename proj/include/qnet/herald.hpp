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
#include <vector>

#include "qnet/circuits.hpp"
#include "qnet/common.hpp"

namespace qnet {

/// Threshold-detector outcome per mode (true = click).
using ClickPattern = std::vector<bool>;

/// A BSM click pattern that heralds two-qudit entanglement between the users.
struct HeraldPattern {
    std::size_t d = 0;
    BsmTopology topology = BsmTopology::Circulant;
    /// Clicked BSM outputs as (group, port), sorted.
    std::vector<std::array<std::size_t, 2>> outputs;
    /// Phase- and permutation-optimized overlap with sum_m |m m>/sqrt(d).
    double fidelity = 0.0;
    /// Probability of the pattern given ideal single photons at every input.
    double weight = 0.0;
    /// bob_relabel[b] is the Alice outcome certified by Bob's key outcome b.
    std::vector<std::size_t> bob_relabel;
    /// Heralded idler state in the key basis, index a*d + b.
    ComplexMatrix ideal_state;

    /// Clicked BSM modes followed by every HSPS herald mode of the layout.
    ModeList click_modes(const NetworkLayout& layout) const;
    /// BSM output modes that must stay dark.
    ModeList dark_modes(const NetworkLayout& layout) const;
};

}  // namespace qnet
