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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <fmt/core.h>
#include <json.hpp>

#include "qnet/cli.hpp"
#include "qnet/detection.hpp"
#include "qnet/keyrate.hpp"
#include "qnet/optimizer.hpp"
#include "qnet/validation.hpp"

using namespace qnet;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

NetworkConfig network(int d, int k, AncillaKind kind) {
    NetworkConfig c;
    c.d = d;
    c.k = k;
    c.ancilla = kind;
    return c;
}

std::string label(const NetworkConfig& c) { return fmt::format("d={} k={} {}", c.d, c.k, to_string(c.ancilla)); }

Outcome analytic_checks() {
    const auto start = Clock::now();
    double worst = 0.0;
    const ModeList one{0}, two{0, 1};
    for (double a : {0.3, 1.0}) {
        const auto st = apply_displacement(vacuum_state(1), 0, a);
        worst = std::max(worst, std::abs(vacuum_probability(st, one) - std::exp(-a * a)));
    }
    for (double r : {0.2, 0.5}) {
        RealMatrix v(2, 2);
        v << std::exp(-2 * r), 0, 0, std::exp(2 * r);
        worst = std::max(worst, std::abs(vacuum_probability(GaussianState(v, RealVector::Zero(2)), one) - 1 / std::cosh(r)));
    }
    for (double s : {0.1, 0.3}) {
        const auto st = apply_two_mode_squeezer(vacuum_state(2), 0, 1, s);
        worst = std::max(worst, std::abs(vacuum_probability(st, two) - 1 / std::pow(std::cosh(s), 2)));
    }
    const double t = seconds_since(start);
    return {worst <= 1e-12 && t < 1.0, fmt::format("max error {:.2e}, {:.3f} s", worst, t)};
}

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    RandomNetworkLimits limits;
    limits.max_modes = 8;
    const unsigned cutoff = 12;
    double dev = 0.0, sum = 0.0, mean = 0.0, deficit = 0.0;
    const int count = 200;
    for (int i = 0; i < count; ++i) {
        const auto c = compare_with_oracle(random_network(rng, limits), cutoff);
        dev = std::max(dev, c.max_deviation);
        sum = std::max(sum, c.gaussian_sum_error);
        mean = std::max(mean, c.max_mean_photons);
        deficit = std::max(deficit, c.truncation_deficit);
    }
    const double t = seconds_since(start);
    return {dev <= 1e-8 && sum <= 1e-9 && mean <= 0.5 && t < 300.0,
            fmt::format("{} networks (<= {} modes, cutoff {}), max deviation {:.2e}, max sum error {:.2e}, "
                        "max mean photons {:.3f}, max truncation deficit {:.2e}, {:.1f} s",
                        count, limits.max_modes, cutoff, dev, sum, mean, deficit, t)};
}

Outcome herald_discovery() {
    bool pass = true;
    std::string detail;
    for (int d : {2, 3, 4}) {
        const auto start = Clock::now();
        const auto heralds = herald_search(network(d, d, AncillaKind::IdealOracle));
        const double t = seconds_since(start);
        double min_f = 1.0;
        for (const auto& h : heralds) min_f = std::min(min_f, h.fidelity);
        const bool ok = static_cast<int>(heralds.size()) == d && min_f >= 1.0 - 1e-6 && t < 600.0;
        pass = pass && ok;
        detail += fmt::format("{}d={}: {} patterns (expected {}), min fidelity {:.9f}, {:.2f} s", detail.empty() ? "" : "; ",
                              d, heralds.size(), d, min_f, t);
    }
    return {pass, detail};
}

Outcome ideal_limit() {
    const auto start = Clock::now();
    bool pass = true;
    std::string detail;
    const NetworkConfig cases[] = {network(2, 2, AncillaKind::TMS), network(3, 3, AncillaKind::HSPS),
                                   network(4, 4, AncillaKind::TMS), network(4, 2, AncillaKind::TMS)};
    for (NetworkConfig c : cases) {
        c.s = 1e-2;
        c.set_ancilla_parameter(1e-2);
        const double rate = evaluate_key_rate(c).conditional_rate;
        const double target = std::log2(static_cast<double>(c.k));
        pass = pass && std::abs(rate - target) <= 0.02;
        detail += fmt::format("{}({},{}) {}: {:.5f} vs {:.5f}", detail.empty() ? "" : "; ", c.d, c.k,
                              to_string(c.ancilla), rate, target);
    }
    const double t = seconds_since(start);
    return {pass && t < 600.0, detail + fmt::format(", {:.1f} s", t)};
}

Outcome rate_surfaces() {
    const auto start = Clock::now();
    bool pass = true;
    std::string detail;
    double best_s_k2 = 0.0, best_s_k4 = 0.0;
    const NetworkConfig cases[] = {network(3, 3, AncillaKind::HSPS), network(3, 3, AncillaKind::WCS),
                                   network(4, 4, AncillaKind::TMS), network(4, 2, AncillaKind::TMS)};
    for (const NetworkConfig& c : cases) {
        const OptBounds b = OptBounds::defaults_for(c.ancilla);
        const auto surface = grid_scan(c, log_grid(b.s_min, b.s_max, 14), log_grid(b.ancilla_min, b.ancilla_max, 14));
        const auto rows = surface.bits.rows(), cols = surface.bits.cols();
        const double peak = surface.bits.maxCoeff();
        double edge = 0.0;
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                if (i == 0 || j == 0 || i == rows - 1 || j == cols - 1) edge = std::max(edge, surface.bits(i, j));
        const double s_best = surface.s_axis.values[surface.best_row];
        const double a_best = surface.ancilla_axis.values[surface.best_col];
        const bool interior = peak > 0.0 && edge < peak;
        pass = pass && interior;
        if (c.d == 4 && c.k == 2) best_s_k2 = s_best;
        if (c.d == 4 && c.k == 4) best_s_k4 = s_best;
        detail += fmt::format("{}{}: max {:.3e} at s={:.3g} {}={:.3g}, boundary max {:.3e} ({})",
                              detail.empty() ? "" : "; ", label(c), peak, s_best, surface.ancilla_axis.name, a_best,
                              edge, interior ? "interior" : "on boundary");
    }
    const bool squeezing = best_s_k2 > best_s_k4;
    pass = pass && squeezing;
    detail += fmt::format("; optimum s for k=2 {:.3g} vs k=4 {:.3g} ({}), {:.1f} s", best_s_k2, best_s_k4,
                          squeezing ? "k=2 larger" : "k=2 not larger", seconds_since(start));
    return {pass, detail};
}

Outcome noise_curves() {
    const auto start = Clock::now();
    std::vector<double> thetas;
    for (int i = 0; i <= 16; ++i) thetas.push_back(i * std::numbers::pi / 64.0);

    OptOptions options;
    auto sweep = [&](const NetworkConfig& c) {
        return noise_sweep(c, thetas, OptBounds::defaults_for(c.ancilla), options, true);
    };
    const auto qubit = sweep(network(2, 2, AncillaKind::TMS));
    const auto d4k2 = sweep(network(4, 2, AncillaKind::TMS));

    double others = 0.0;
    std::string at_zero;
    for (const NetworkConfig& c : {network(3, 3, AncillaKind::HSPS), network(3, 3, AncillaKind::WCS),
                                   network(4, 4, AncillaKind::TMS)}) {
        const double r = optimize_rate(c, 0.0, OptBounds::defaults_for(c.ancilla), options).bits_per_round;
        others = std::max(others, r);
        at_zero += fmt::format(", {} {:.3e}", label(c), r);
    }
    others = std::max(others, d4k2.front().bits_per_round);
    const bool part_a = qubit.front().bits_per_round > others;

    bool part_b = false;
    double min_qubit = qubit.front().bits_per_round, min_theta = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (qubit[i].bits_per_round == 0.0 && d4k2[i].bits_per_round > 0.0) part_b = true;
        if (qubit[i].bits_per_round < min_qubit) {
            min_qubit = qubit[i].bits_per_round;
            min_theta = thetas[i];
        }
    }
    return {part_a && part_b,
            fmt::format("(a) {}: theta=0 d=2 {:.3e}, d=4 k=2 {:.3e}{}; (b) {}: min d=2 rate {:.3e} at theta={:.4f}, "
                        "d=4 k=2 rate there {:.3e}; {} theta points, {:.1f} s",
                        part_a ? "PASS" : "FAIL", qubit.front().bits_per_round, d4k2.front().bits_per_round, at_zero,
                        part_b ? "PASS" : "FAIL", min_qubit, min_theta,
                        d4k2[static_cast<std::size_t>(std::lround(min_theta * 64.0 / std::numbers::pi))].bits_per_round,
                        thetas.size(), seconds_since(start))};
}

Outcome performance() {
    // Random 24-mode state from squeezed pairs, coherent light and a Haar
    // interferometer; 20 clicked modes and 4 silent ones.
    std::mt19937_64 rng(99);
    const std::size_t n = 24;
    GaussianState st = vacuum_state(n);
    for (std::size_t m = 0; m + 1 < n; m += 2) st = apply_two_mode_squeezer(st, m, m + 1, 0.6);
    st = apply_displacement(st, 5, Complex(0.4, 0.2));
    ModeList all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    st = apply_interferometer(st, haar_unitary(rng, n), all);
    const ModeList clicked(all.begin(), all.begin() + 20), silent(all.begin() + 20, all.end());
    auto start = Clock::now();
    const double p = click_probability(st, clicked, silent);
    const double t_click = seconds_since(start);

    NetworkConfig c = network(4, 2, AncillaKind::TMS);
    const auto heralds = herald_search(c);
    const auto net = build_network(c);
    start = Clock::now();
    const auto joint = joint_outcome_distribution(net, heralds.front());
    const double t_joint = seconds_since(start);
    return {t_click < 300.0 && t_joint < 60.0 && p >= 0.0 && joint.accept_probability > 0.0,
            fmt::format("20-click probability on 24 modes {:.3e} in {:.2f} s; d=4 joint distribution in {:.3f} s", p,
                        t_click, t_joint)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string manifest_without_timestamps(const fs::path& p) {
    auto j = nlohmann::ordered_json::parse(slurp(p));
    j.erase("started_utc");
    j.erase("finished_utc");
    return j.dump();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "qnet_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    std::ofstream(root / "scan.json") << R"({
  "network": {"d": 3, "k": 3, "ancilla": "HSPS", "s": 0.3, "xi": 0.2},
  "scan": {"s": {"min": 0.01, "max": 1.2, "points": 6}, "ancilla": {"min": 0.01, "max": 1.2, "points": 6}}
}
)";
    std::ofstream(root / "sweep.json") << R"({
  "network": {"d": 2, "k": 2},
  "sweep": {
    "theta": {"min": 0.0, "max": 0.3, "points": 4, "spacing": "linear"},
    "series": [{"d": 2, "k": 2}, {"d": 4, "k": 2, "ancilla": "TMS"}]
  }
}
)";
    std::ostringstream out, err;
    bool ok = true;
    std::size_t files = 0;
    for (const char* run : {"a", "b"}) {
        ok = ok && cmd_scan((root / "scan.json").string(), (root / run / "scan").string(), 2, out, err) == kExitOk;
        ok = ok && cmd_sweep((root / "sweep.json").string(), (root / run / "sweep").string(), 2, out, err) == kExitOk;
    }
    for (const char* sub : {"scan", "sweep"})
        for (const auto& entry : fs::directory_iterator(root / "a" / sub)) {
            const fs::path other = root / "b" / sub / entry.path().filename();
            ++files;
            if (entry.path().filename() == "manifest.json")
                ok = ok && manifest_without_timestamps(entry.path()) == manifest_without_timestamps(other);
            else
                ok = ok && slurp(entry.path()) == slurp(other);
        }
    fs::remove_all(root);
    return {ok && files == 5,
            fmt::format("{} output files compared across two scan and two sweep runs{}", files,
                        err.str().empty() ? "" : ", errors: " + err.str())};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"analytic Gaussian checks", analytic_checks},
        {"Gaussian vs Fock oracle equivalence", oracle_equivalence},
        {"herald discovery", herald_discovery},
        {"ideal-limit key rate", ideal_limit},
        {"rate surfaces: interior maxima and squeezing tolerance", rate_surfaces},
        {"noise sweep: qubit advantage and high-noise survival", noise_curves},
        {"performance", performance},
        {"determinism", determinism},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failures += o.pass ? 0 : 1;
        std::cout << fmt::format("CRITERION {} {}: {} ({})", index++, o.pass ? "PASS" : "FAIL", name, o.detail)
                  << std::endl;
    }
    std::cout << fmt::format("{} of 8 criteria passed", 8 - failures) << std::endl;
    return failures == 0 ? 0 : 1;
}
