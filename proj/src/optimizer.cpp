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

#include "qnet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <thread>

#include <fmt/core.h>

namespace qnet {
namespace {

struct Evaluation {
    RateReport report;
    std::string diagnostic;
};

Evaluation evaluate_point(NetworkConfig config, double s, double ancilla) {
    config.s = s;
    config.set_ancilla_parameter(ancilla);
    try {
        return {evaluate_key_rate(config), {}};
    } catch (const std::exception& e) {
        return {RateReport{}, e.what()};
    }
}

// Evaluates jobs[i] into results[i]; threads take interleaved indices so the
// output is independent of scheduling.
std::vector<Evaluation> evaluate_batch(const NetworkConfig& config, const std::vector<std::pair<double, double>>& jobs,
                                       std::size_t threads) {
    std::vector<Evaluation> results(jobs.size());
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < jobs.size(); i += stride)
            results[i] = evaluate_point(config, jobs[i].first, jobs[i].second);
    };
    threads = std::max<std::size_t>(1, std::min(threads, jobs.size()));
    if (threads == 1) {
        work(0, 1);
        return results;
    }
    // Warm the herald cache once before fanning out.
    if (!jobs.empty()) results[0] = evaluate_point(config, jobs[0].first, jobs[0].second);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < jobs.size(); i += threads)
                if (i != 0) results[i] = evaluate_point(config, jobs[i].first, jobs[i].second);
        });
    for (auto& th : pool) th.join();
    return results;
}

void check_grid(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(fmt::format("grid_scan: {} grid is empty", name));
    for (double v : grid)
        if (!(std::isfinite(v) && v >= 0.0))
            throw std::invalid_argument(fmt::format("grid_scan: {} grid value {} is not a non-negative number", name, v));
}

}  // namespace

OptBounds OptBounds::defaults_for(AncillaKind kind) {
    OptBounds b;
    if (kind == AncillaKind::WCS) b.ancilla_max = 1.5;
    return b;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi >= lo)) throw std::invalid_argument("log_grid: need 0 < lo <= hi");
    if (n == 0) throw std::invalid_argument("log_grid: need at least one point");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.back() = hi;
    return out;
}

bool has_ancilla_parameter(const NetworkConfig& config) {
    return config.d > 2 && config.ancilla != AncillaKind::IdealOracle;
}

RateSurface grid_scan(const NetworkConfig& config, const std::vector<double>& s_grid,
                      const std::vector<double>& ancilla_grid, std::size_t threads) {
    check_grid(s_grid, "s");
    check_grid(ancilla_grid, "ancilla");
    config.validate();
    RateSurface surface;
    surface.config = config;
    surface.s_axis = {"s", s_grid};
    surface.ancilla_axis = {config.ancilla == AncillaKind::WCS ? "alpha" : "xi", ancilla_grid};

    std::vector<std::pair<double, double>> jobs;
    for (double s : s_grid)
        for (double a : ancilla_grid) jobs.emplace_back(s, a);
    auto results = evaluate_batch(config, jobs, threads);

    const auto rows = static_cast<Eigen::Index>(s_grid.size());
    const auto cols = static_cast<Eigen::Index>(ancilla_grid.size());
    surface.bits = RealMatrix::Zero(rows, cols);
    double best = -1.0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            auto& r = results[static_cast<std::size_t>(i * cols + j)];
            surface.bits(i, j) = r.report.bits_per_round;
            if (r.report.bits_per_round > best) {
                best = r.report.bits_per_round;
                surface.best_row = static_cast<std::size_t>(i);
                surface.best_col = static_cast<std::size_t>(j);
            }
            surface.reports.push_back(std::move(r.report));
            surface.diagnostics.push_back(std::move(r.diagnostic));
        }
    return surface;
}

OptResult optimize_rate(const NetworkConfig& config, double theta, const OptBounds& bounds, const OptOptions& options) {
    if (!(bounds.s_min > 0.0 && bounds.s_max >= bounds.s_min && bounds.ancilla_min > 0.0 &&
          bounds.ancilla_max >= bounds.ancilla_min))
        throw std::invalid_argument("optimize_rate: bounds must be positive and ordered");
    if (options.coarse_points < 2 || options.refine_points < 2 || !(options.shrink > 1.0))
        throw std::invalid_argument("optimize_rate: invalid refinement options");
    NetworkConfig cfg = config;
    cfg.theta = theta;
    cfg.validate();
    const bool two_axes = has_ancilla_parameter(cfg);

    std::map<std::pair<double, double>, RateReport> seen;
    OptResult result;
    result.theta = theta;
    result.bits_per_round = -1.0;

    // Evaluates new points in order; the best is replaced only on strict
    // improvement, so ties keep the earliest point.
    auto run = [&](const std::vector<std::pair<double, double>>& points) {
        std::vector<std::pair<double, double>> fresh;
        for (const auto& p : points)
            if (!seen.count(p) && std::find(fresh.begin(), fresh.end(), p) == fresh.end()) fresh.push_back(p);
        auto evals = evaluate_batch(cfg, fresh, options.threads);
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            const double bits = evals[i].report.bits_per_round;
            if (bits > result.bits_per_round) {
                result.bits_per_round = bits;
                result.best_s = fresh[i].first;
                result.best_ancilla = fresh[i].second;
                result.report = evals[i].report;
            }
            seen.emplace(fresh[i], std::move(evals[i].report));
        }
    };

    const double fixed_ancilla = two_axes ? bounds.ancilla_min : cfg.ancilla_parameter();
    const auto s_coarse = log_grid(bounds.s_min, bounds.s_max, options.coarse_points);
    const auto a_coarse = two_axes ? log_grid(bounds.ancilla_min, bounds.ancilla_max, options.coarse_points)
                                   : std::vector<double>{fixed_ancilla};
    std::vector<std::pair<double, double>> points;
    for (double s : s_coarse)
        for (double a : a_coarse) points.emplace_back(s, a);
    for (const auto& seed : options.seeds) points.emplace_back(seed.first, two_axes ? seed.second : fixed_ancilla);
    run(points);

    double half_s = std::log(bounds.s_max / bounds.s_min) / static_cast<double>(options.coarse_points - 1);
    double half_a = two_axes ? std::log(bounds.ancilla_max / bounds.ancilla_min) /
                                   static_cast<double>(options.coarse_points - 1)
                             : 0.0;
    auto local_axis = [&](double centre, double half, double lo, double hi) {
        std::vector<double> out;
        const std::size_t n = options.refine_points;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            out.push_back(std::clamp(centre * std::exp(u * half), lo, hi));
        }
        return out;
    };
    for (std::size_t round = 0; round < options.refine_rounds; ++round) {
        const auto s_axis = local_axis(result.best_s, half_s, bounds.s_min, bounds.s_max);
        const auto a_axis = two_axes ? local_axis(result.best_ancilla, half_a, bounds.ancilla_min, bounds.ancilla_max)
                                     : std::vector<double>{fixed_ancilla};
        points.clear();
        for (double s : s_axis)
            for (double a : a_axis) points.emplace_back(s, a);
        run(points);
        half_s /= options.shrink;
        half_a /= options.shrink;
    }
    result.bits_per_round = std::max(result.bits_per_round, 0.0);
    result.evaluations = seen.size();
    return result;
}

std::vector<OptResult> noise_sweep(const NetworkConfig& config, const std::vector<double>& thetas,
                                   const OptBounds& bounds, const OptOptions& options, bool warm_start) {
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!(std::isfinite(thetas[i]) && thetas[i] >= 0.0))
            throw std::invalid_argument(fmt::format("noise_sweep: theta {} must be non-negative", thetas[i]));
        if (i > 0 && thetas[i] < thetas[i - 1]) throw std::invalid_argument("noise_sweep: theta list must be sorted");
    }
    std::vector<OptResult> out;
    for (double theta : thetas) {
        OptOptions opts = options;
        if (warm_start && !out.empty()) opts.seeds.emplace_back(out.back().best_s, out.back().best_ancilla);
        out.push_back(optimize_rate(config, theta, bounds, opts));
    }
    return out;
}

}  // namespace qnet
