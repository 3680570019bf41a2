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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnet/circuits.hpp"
#include "qnet/optimizer.hpp"

namespace qnet {

struct ScanSettings {
    std::vector<double> s_grid;
    std::vector<double> ancilla_grid;
};

struct SweepSeries {
    std::string label;
    NetworkConfig network;
    OptBounds bounds;
};

struct SweepSettings {
    std::vector<double> thetas;
    std::vector<SweepSeries> series;
    OptOptions options;
    bool warm_start = true;
};

struct RunConfig {
    std::string origin;
    std::string text;
    NetworkConfig network;
    std::optional<ScanSettings> scan;
    std::optional<SweepSettings> sweep;
    double herald_threshold = 0.0;
    std::size_t threads = 1;
};

/// Parses a JSON run description. Errors are ConfigError with "origin:line: message".
RunConfig parse_run_config(std::string_view text, std::string_view origin);
RunConfig load_run_config(const std::string& path);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace qnet
