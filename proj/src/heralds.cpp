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

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

#include <fmt/core.h>

#include "qnet/detection.hpp"
#include "qnet/fock.hpp"

namespace qnet {

ModeList HeraldPattern::click_modes(const NetworkLayout& layout) const {
    ModeList modes;
    for (const auto& [group, port] : outputs) modes.push_back(layout.bsm_output.at(group).at(port));
    modes.insert(modes.end(), layout.hsps_heralds.begin(), layout.hsps_heralds.end());
    return modes;
}

ModeList HeraldPattern::dark_modes(const NetworkLayout& layout) const {
    ModeList modes;
    for (std::size_t g = 0; g < layout.d; ++g)
        for (std::size_t p = 0; p < layout.d; ++p)
            if (std::find(outputs.begin(), outputs.end(), std::array<std::size_t, 2>{g, p}) == outputs.end())
                modes.push_back(layout.bsm_output[g][p]);
    return modes;
}

namespace {

constexpr double kIdealPairSqueezing = 0.1;
constexpr std::size_t kMaxSearchDimension = 4;

std::vector<HeraldPattern> discover(std::size_t d, BsmTopology topology) {
    NetworkConfig cfg;
    cfg.d = static_cast<int>(d);
    cfg.k = static_cast<int>(d);
    cfg.ancilla = AncillaKind::IdealOracle;
    cfg.s = kIdealPairSqueezing;
    cfg.topology = topology;
    const CompiledNetwork net = build_network(cfg);
    const NetworkLayout& layout = net.layout;

    // d - 2 ancilla photons plus one pair per user is the only sector that can
    // produce d BSM clicks together with one photon per idler group.
    const auto bound = static_cast<unsigned>(d + 2);
    FockState full = fock_expand(net, bound, bound);
    FockState sector{full.n_modes, full.cutoff, full.photon_bound, {}};
    std::set<std::uint32_t> masks;
    const ModeList outputs = layout.bsm_output_modes();
    for (const auto& [occ, amp] : full.amplitudes) {
        unsigned na = 0;
        unsigned nb = 0;
        for (std::size_t m = 0; m < d; ++m) {
            na += occ[layout.alice_idler[m]];
            nb += occ[layout.bob_idler[m]];
        }
        if (na != 1 || nb != 1) continue;
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < outputs.size(); ++i)
            if (occ[outputs[i]] > 0) mask |= std::uint32_t{1} << i;
        if (static_cast<std::size_t>(std::popcount(mask)) != d) continue;
        masks.insert(mask);
        sector.amplitudes.emplace(occ, amp);
    }

    // Probability of one pair per user: d * tanh^2 s / cosh^{2d} s, squared.
    const double t = std::tanh(kIdealPairSqueezing);
    const double one_pair = static_cast<double>(d) * t * t / std::pow(std::cosh(kIdealPairSqueezing), 2.0 * d);

    std::vector<HeraldPattern> found;
    for (std::uint32_t mask : masks) {
        HeraldPattern h;
        h.d = d;
        h.topology = topology;
        for (std::size_t i = 0; i < outputs.size(); ++i)
            if (mask & (std::uint32_t{1} << i)) h.outputs.push_back({i / d, i % d});
        const ConditionalState cond = conditional_two_qudit_state(sector, h, layout);
        const EntangledOverlap overlap = best_entangled_overlap(cond.rho, d);
        h.fidelity = overlap.fidelity;
        h.weight = cond.weight / (one_pair * one_pair);
        h.bob_relabel.assign(d, 0);
        for (std::size_t m = 0; m < d; ++m) h.bob_relabel[overlap.permutation[m]] = m;
        h.ideal_state = cond.rho;
        found.push_back(std::move(h));
    }
    std::sort(found.begin(), found.end(), [](const HeraldPattern& a, const HeraldPattern& b) {
        return a.outputs < b.outputs;
    });
    return found;
}

}  // namespace

std::vector<HeraldPattern> herald_candidates(const NetworkConfig& config) {
    const auto d = static_cast<std::size_t>(config.d);
    if (d < 2 || d > kMaxSearchDimension)
        throw std::invalid_argument(fmt::format("herald search supports 2 <= d <= {} (got {})", kMaxSearchDimension, d));
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, BsmTopology>, std::vector<HeraldPattern>> cache;
    const auto key = std::make_pair(d, config.topology);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto found = discover(d, config.topology);
    std::lock_guard lock(mutex);
    return cache.try_emplace(key, std::move(found)).first->second;
}

std::vector<HeraldPattern> herald_search(const NetworkConfig& config, double fidelity_threshold) {
    std::vector<HeraldPattern> perfect;
    for (auto& h : herald_candidates(config))
        if (h.fidelity >= fidelity_threshold) perfect.push_back(std::move(h));
    if (perfect.empty())
        throw NumericalError(fmt::format("herald search: no pattern reaches fidelity {} for d={} with the {} BSM",
                                         fidelity_threshold, config.d, to_string(config.topology)));
    return perfect;
}

}  // namespace qnet
