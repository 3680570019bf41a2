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

#include <string>
#include <vector>

#include "qnet/circuits.hpp"
#include "qnet/keyrate.hpp"

namespace qnet {

struct GridAxis {
    std::string name;
    std::vector<double> values;
};

struct RateSurface {
    NetworkConfig config;
    GridAxis s_axis;
    GridAxis ancilla_axis;
    /// bits[i][j] at s_axis.values[i], ancilla_axis.values[j].
    RealMatrix bits;
    /// Full reports, row-major.
    std::vector<RateReport> reports;
    /// Non-empty message for cells whose pipeline failed (recorded as 0).
    std::vector<std::string> diagnostics;
    std::size_t best_row = 0;
    std::size_t best_col = 0;

    const RateReport& report(std::size_t i, std::size_t j) const { return reports[i * ancilla_axis.values.size() + j]; }
    bool failed(std::size_t i, std::size_t j) const { return !diagnostics[i * ancilla_axis.values.size() + j].empty(); }
};

struct OptBounds {
    double s_min = 1e-3;
    double s_max = 1.2;
    double ancilla_min = 1e-3;
    double ancilla_max = 1.2;

    /// Defaults for the ancilla kind: |alpha| up to 1.5 for WCS, 1.2 else.
    static OptBounds defaults_for(AncillaKind kind);
};

struct OptOptions {
    std::size_t coarse_points = 12;
    std::size_t refine_rounds = 4;
    double shrink = 3.0;
    std::size_t refine_points = 5;
    std::size_t threads = 1;
    /// Extra (s, ancilla) points evaluated alongside the coarse grid.
    std::vector<std::pair<double, double>> seeds;
};

struct OptResult {
    double theta = 0.0;
    double best_s = 0.0;
    double best_ancilla = 0.0;
    double bits_per_round = 0.0;
    std::size_t evaluations = 0;
    RateReport report;
};

/// Geometric grid of n points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Whether the ancilla parameter affects the network (false for d = 2).
bool has_ancilla_parameter(const NetworkConfig& config);

RateSurface grid_scan(const NetworkConfig& config, const std::vector<double>& s_grid,
                      const std::vector<double>& ancilla_grid, std::size_t threads = 1);

OptResult optimize_rate(const NetworkConfig& config, double theta, const OptBounds& bounds,
                        const OptOptions& options = {});

/// One optimization per theta. With warm_start, each theta is also seeded
/// with the previous optimum.
std::vector<OptResult> noise_sweep(const NetworkConfig& config, const std::vector<double>& thetas,
                                   const OptBounds& bounds, const OptOptions& options = {}, bool warm_start = true);

}  // namespace qnet
