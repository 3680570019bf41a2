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

#include "qnet/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "qnet/config.hpp"
#include "qnet/detection.hpp"
#include "qnet/optimizer.hpp"
#include "qnet/validation.hpp"

namespace qnet {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitPipeline;
    }
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    out.close();
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
    ojson j;
    j["tool"] = "qnet";
    j["version"] = m.tool_version;
    j["command"] = m.command;
    j["config_path"] = m.config_path;
    j["config_sha256"] = m.config_sha256;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    j["outputs"] = m.outputs;
    j["diagnostics"] = m.diagnostics;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
}

RunManifest start_manifest(const RunConfig& cfg, const std::string& command) {
    RunManifest m;
    m.config_path = cfg.origin;
    m.config_sha256 = sha256_hex(cfg.text);
    m.command = command;
    m.started_utc = utc_now();
    return m;
}

std::string join_csv(std::initializer_list<double> values) {
    std::string line;
    for (double v : values) {
        if (!line.empty()) line += ',';
        line += format_csv_number(v);
    }
    return line + "\n";
}

std::string permutation_text(const std::vector<std::size_t>& p) { return fmt::format("[{}]", fmt::join(p, ",")); }

}  // namespace

std::string format_csv_number(double value) { return fmt::format("{:.17g}", value); }

int cmd_scan(const std::string& config_path, const std::string& out_dir, std::size_t threads, std::ostream& out,
             std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = load_run_config(config_path);
        if (!cfg.scan) throw ConfigError(fmt::format("{}:1: (root): missing section 'scan'", config_path));
        RunManifest manifest = start_manifest(cfg, "scan");
        const std::size_t workers = threads ? threads : cfg.threads;

        const RateSurface surface = grid_scan(cfg.network, cfg.scan->s_grid, cfg.scan->ancilla_grid, workers);

        std::string csv = "s,ancilla_param,bits_per_round,accept_probability,sift_probability,H_key,H_test\n";
        for (std::size_t i = 0; i < surface.s_axis.values.size(); ++i)
            for (std::size_t j = 0; j < surface.ancilla_axis.values.size(); ++j) {
                const RateReport& r = surface.report(i, j);
                csv += join_csv({surface.s_axis.values[i], surface.ancilla_axis.values[j], r.bits_per_round,
                                 r.accept_probability, r.sift_probability, r.H_key, r.H_test});
                if (surface.failed(i, j))
                    manifest.diagnostics.push_back(fmt::format("s={} ancilla={}: {}", surface.s_axis.values[i],
                                                               surface.ancilla_axis.values[j],
                                                               surface.diagnostics[i * surface.ancilla_axis.values.size() + j]));
            }
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "scan.csv", csv);
        manifest.outputs = {"scan.csv"};
        manifest.finished_utc = utc_now();
        write_manifest(out_dir, manifest);

        out << fmt::format("scan: d={} k={} ancilla={} modes={} cells={} failed={}\n", cfg.network.d, cfg.network.k,
                           to_string(cfg.network.ancilla), make_layout(cfg.network).n_modes,
                           surface.reports.size(), manifest.diagnostics.size());
        out << fmt::format("best: s={:.6g} {}={:.6g} bits_per_round={:.6e}\n",
                           surface.s_axis.values[surface.best_row], surface.ancilla_axis.name,
                           surface.ancilla_axis.values[surface.best_col],
                           surface.bits(static_cast<Eigen::Index>(surface.best_row),
                                        static_cast<Eigen::Index>(surface.best_col)));
        return kExitOk;
    });
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, std::size_t threads, std::ostream& out,
              std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = load_run_config(config_path);
        if (!cfg.sweep) throw ConfigError(fmt::format("{}:1: (root): missing section 'sweep'", config_path));
        RunManifest manifest = start_manifest(cfg, "sweep");
        OptOptions options = cfg.sweep->options;
        options.threads = threads ? threads : cfg.threads;

        std::vector<std::pair<std::string, std::string>> files;
        for (const SweepSeries& series : cfg.sweep->series) {
            const auto results =
                noise_sweep(series.network, cfg.sweep->thetas, series.bounds, options, cfg.sweep->warm_start);
            std::string csv = "theta,best_s,best_ancilla_param,bits_per_round\n";
            for (const auto& r : results) csv += join_csv({r.theta, r.best_s, r.best_ancilla, r.bits_per_round});
            files.emplace_back(fmt::format("sweep_{}.csv", series.label), std::move(csv));
            out << fmt::format("series {}: {} points, rate at theta={:.6g}: {:.6e}\n", series.label, results.size(),
                               results.front().theta, results.front().bits_per_round);
        }
        fs::create_directories(out_dir);
        for (const auto& [name, csv] : files) {
            write_file(fs::path(out_dir) / name, csv);
            manifest.outputs.push_back(name);
        }
        manifest.finished_utc = utc_now();
        write_manifest(out_dir, manifest);
        return kExitOk;
    });
}

int cmd_heralds(const std::string& config_path, bool as_json, bool broken_topology, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = load_run_config(config_path);
        NetworkConfig network = cfg.network;
        if (broken_topology) network.topology = BsmTopology::PerLevel;
        const auto heralds = herald_search(network, cfg.herald_threshold);

        if (as_json) {
            ojson j;
            j["d"] = network.d;
            j["topology"] = std::string(to_string(network.topology));
            j["threshold"] = cfg.herald_threshold;
            j["heralds"] = ojson::array();
            for (const auto& h : heralds) {
                ojson entry;
                entry["outputs"] = h.outputs;
                entry["fidelity"] = h.fidelity;
                entry["weight"] = h.weight;
                entry["bob_relabel"] = h.bob_relabel;
                j["heralds"].push_back(entry);
            }
            out << j.dump(2) << "\n";
        } else {
            out << fmt::format("d={} topology={} perfect heralds: {}\n", network.d, to_string(network.topology),
                               heralds.size());
            for (std::size_t i = 0; i < heralds.size(); ++i) {
                const auto& h = heralds[i];
                std::string clicks;
                for (const auto& o : h.outputs) clicks += fmt::format(" ({},{})", o[0], o[1]);
                out << fmt::format("  #{} clicks{} fidelity={:.12f} weight={:.6e} relabel={}\n", i, clicks,
                                   h.fidelity, h.weight, permutation_text(h.bob_relabel));
            }
        }
        return kExitOk;
    });
}

int cmd_validate(const std::string& scale, bool as_json, std::uint64_t seed, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ojson report;
        report["scale"] = scale;
        bool ok = true;
        if (scale == "small" || scale == "vacuum") {
            const bool vacuum = scale == "vacuum";
            std::mt19937_64 rng(seed);
            RandomNetworkLimits limits;
            limits.max_modes = 8;
            if (vacuum) limits.max_squeezing = limits.max_amplitude = 0.0;
            const std::size_t count = vacuum ? 20 : 50;
            double max_dev = 0.0, max_sum = 0.0, max_deficit = 0.0, max_excess = 0.0;
            for (std::size_t n = 0; n < count; ++n) {
                const auto c = compare_with_oracle(random_network(rng, limits), 12);
                max_dev = std::max(max_dev, c.max_deviation);
                max_sum = std::max(max_sum, c.gaussian_sum_error);
                max_deficit = std::max(max_deficit, c.truncation_deficit);
                max_excess = std::max(max_excess, c.max_deviation - std::max(1e-8, c.truncation_deficit));
            }
            double vacuum_click = 0.0;
            if (vacuum) {
                // The compiled network with every source switched off.
                NetworkConfig cfg;
                cfg.d = 3;
                cfg.k = 3;
                cfg.ancilla = AncillaKind::WCS;
                cfg.s = cfg.xi = cfg.alpha = 0.0;
                const auto net = build_network(cfg);
                const auto dist = all_pattern_distribution(net.output_state(), net.detector_modes);
                for (std::size_t m = 1; m < dist.size(); ++m) vacuum_click = std::max(vacuum_click, std::abs(dist[m]));
                max_sum = std::max(max_sum, std::abs(dist[0] - 1.0));
                report["network_max_click_probability"] = vacuum_click;
                ok = ok && vacuum_click == 0.0 && max_dev == 0.0;
            }
            ok = ok && max_excess <= 0.0 && max_sum <= 1e-9;
            report["networks"] = count;
            report["max_deviation"] = max_dev;
            report["max_sum_error"] = max_sum;
            report["max_truncation_deficit"] = max_deficit;
        } else if (scale == "d4") {
            NetworkConfig cfg;
            cfg.d = 4;
            cfg.k = 2;
            cfg.ancilla = AncillaKind::TMS;
            const auto t0 = std::chrono::steady_clock::now();
            const auto heralds = herald_search(cfg);
            const auto t1 = std::chrono::steady_clock::now();
            const auto net = build_network(cfg);
            const auto state = net.output_state();
            ojson per = ojson::array();
            for (const auto& h : heralds) {
                const auto a = std::chrono::steady_clock::now();
                const auto joint = joint_outcome_distribution(net, state, h);
                const auto b = std::chrono::steady_clock::now();
                per.push_back({{"accept_probability", joint.accept_probability},
                               {"seconds", std::chrono::duration<double>(b - a).count()}});
            }
            report["herald_search_seconds"] = std::chrono::duration<double>(t1 - t0).count();
            report["modes"] = net.layout.n_modes;
            report["detectors"] = net.detector_modes.size();
            report["joint_distributions"] = per;
        } else {
            throw ConfigError(fmt::format("--scale: unknown scale '{}' (expected small, vacuum or d4)", scale));
        }
        report["status"] = ok ? "ok" : "failed";
        if (as_json) {
            out << report.dump(2) << "\n";
        } else {
            for (const auto& [key, value] : report.items()) out << key << ": " << value.dump() << "\n";
        }
        return ok ? kExitOk : kExitPipeline;
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Linear-optical entanglement swapping network simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string config_path, out_dir, scale = "small";
    std::size_t threads = 0;
    bool as_json = false, broken = false, seedless = true;
    std::uint64_t seed = 20240611;

    auto* scan = app.add_subcommand("scan", "Rate surface over the (s, ancilla) grid");
    auto* sweep = app.add_subcommand("sweep", "Optimized rate versus crosstalk angle");
    for (auto* sub : {scan, sweep}) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "Output directory")->required();
        sub->add_option("--threads", threads, "Worker threads (0 = from config)");
        sub->add_flag("--seedless", seedless, "Deterministic run (always on)");
    }
    auto* heralds = app.add_subcommand("heralds", "List perfect heralding patterns");
    heralds->add_option("--config", config_path, "JSON run configuration")->required();
    heralds->add_flag("--json", as_json, "JSON output");
    heralds->add_flag("--broken-topology", broken, "Use the per-level BSM instead of the circulant one");
    auto* validate = app.add_subcommand("validate", "Gaussian versus Fock oracle agreement");
    validate->add_option("--scale", scale, "small | vacuum | d4");
    validate->add_option("--seed", seed, "Random network seed");
    validate->add_flag("--json", as_json, "JSON output");
    validate->add_flag("--seedless", seedless, "Deterministic run (always on)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (scan->parsed()) return cmd_scan(config_path, out_dir, threads, out, err);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, threads, out, err);
    if (heralds->parsed()) return cmd_heralds(config_path, as_json, broken, out, err);
    return cmd_validate(scale, as_json, seed, out, err);
}

}  // namespace qnet
