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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qnet {

inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPipeline = 3;

struct RunManifest {
    std::string config_path;
    std::string config_sha256;
    std::string tool_version = kToolVersion;
    std::string command;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::string> outputs;
    /// Grid cells or sweep points whose evaluation failed, one line each.
    std::vector<std::string> diagnostics;
};

/// Writes the rate surface to <out_dir>/scan.csv plus manifest.json.
int cmd_scan(const std::string& config_path, const std::string& out_dir, std::size_t threads, std::ostream& out,
             std::ostream& err);
/// One CSV per series, sweep_<label>.csv, plus manifest.json.
int cmd_sweep(const std::string& config_path, const std::string& out_dir, std::size_t threads, std::ostream& out,
              std::ostream& err);
/// Lists perfect heralds. broken_topology swaps the BSM for the per-level
/// network, which cannot herald d >= 3 entanglement.
int cmd_heralds(const std::string& config_path, bool as_json, bool broken_topology, std::ostream& out,
                std::ostream& err);
/// scale is "small", "vacuum" or "d4".
int cmd_validate(const std::string& scale, bool as_json, std::uint64_t seed, std::ostream& out, std::ostream& err);

/// Full command line; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Fixed 17-significant-digit rendering used by every CSV.
std::string format_csv_number(double value);

}  // namespace qnet
