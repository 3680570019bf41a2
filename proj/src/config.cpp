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

#include "qnet/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <fmt/format.h>
#include <json.hpp>

#include "qnet/detection.hpp"

namespace qnet {
namespace {

using json = nlohmann::json;

// Parser messages start with "field: "; the reader adds its own prefix.
std::string strip_field(const std::string& message) {
    const auto colon = message.find(": ");
    return colon == std::string::npos ? message : message.substr(colon + 2);
}

// Character iterator that counts newlines as the parser consumes input.
class LineCountingIterator {
public:
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    LineCountingIterator() = default;
    LineCountingIterator(const char* pos, std::size_t* line) : pos_(pos), line_(line) {}

    reference operator*() const { return *pos_; }
    LineCountingIterator& operator++() {
        if (*pos_ == '\n') ++*line_;
        ++pos_;
        return *this;
    }
    LineCountingIterator operator++(int) {
        auto copy = *this;
        ++*this;
        return copy;
    }
    bool operator==(const LineCountingIterator& other) const { return pos_ == other.pos_; }
    bool operator!=(const LineCountingIterator& other) const { return pos_ != other.pos_; }

private:
    const char* pos_ = nullptr;
    std::size_t* line_ = nullptr;
};

// Builds the DOM while recording the line of every object key and array
// element, addressed by JSON pointer.
class LocatingHandler {
public:
    LocatingHandler(json& root, const std::size_t* line) : dom_(root, false), line_(line) {}

    bool null() { return value_start() && dom_.null(); }
    bool boolean(bool v) { return value_start() && dom_.boolean(v); }
    bool number_integer(json::number_integer_t v) { return value_start() && dom_.number_integer(v); }
    bool number_unsigned(json::number_unsigned_t v) { return value_start() && dom_.number_unsigned(v); }
    bool number_float(json::number_float_t v, const std::string& s) { return value_start() && dom_.number_float(v, s); }
    bool string(std::string& v) { return value_start() && dom_.string(v); }
    bool binary(json::binary_t& v) { return value_start() && dom_.binary(v); }

    bool start_object(std::size_t n) {
        value_start();
        frames_.push_back({false, 0, {}});
        return dom_.start_object(n);
    }
    bool key(std::string& k) {
        frames_.back().key = k;
        lines_[current_pointer()] = *line_;
        return dom_.key(k);
    }
    bool end_object() {
        frames_.pop_back();
        return dom_.end_object();
    }
    bool start_array(std::size_t n) {
        value_start();
        frames_.push_back({true, 0, {}});
        return dom_.start_array(n);
    }
    bool end_array() {
        frames_.pop_back();
        return dom_.end_array();
    }
    bool parse_error(std::size_t position, const std::string& token, const nlohmann::detail::exception& ex) {
        error_line_ = *line_;
        error_ = ex.what();
        (void)position;
        (void)token;
        return false;
    }

    std::map<std::string, std::size_t> take_lines() { return std::move(lines_); }
    std::size_t error_line() const { return error_line_; }
    const std::string& error() const { return error_; }

private:
    struct Frame {
        bool is_array;
        std::size_t next_index;
        std::string key;
    };

    bool value_start() {
        if (!frames_.empty() && frames_.back().is_array) {
            frames_.back().key = std::to_string(frames_.back().next_index++);
            lines_[current_pointer()] = *line_;
        }
        return true;
    }
    std::string current_pointer() const {
        std::string out;
        for (const auto& f : frames_) out += "/" + f.key;
        return out;
    }

    nlohmann::detail::json_sax_dom_parser<json> dom_;
    const std::size_t* line_;
    std::vector<Frame> frames_;
    std::map<std::string, std::size_t> lines_;
    std::size_t error_line_ = 0;
    std::string error_;
};

class ConfigReader {
public:
    ConfigReader(std::string origin, std::map<std::string, std::size_t> lines)
        : origin_(std::move(origin)), lines_(std::move(lines)) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        throw ConfigError(fmt::format("{}:{}: {}: {}", origin_, line_of(pointer), dotted(pointer), message));
    }

    void collect(const std::string& pointer, const std::string& message) {
        problems_.push_back(fmt::format("{}:{}: {}: {}", origin_, line_of(pointer), dotted(pointer), message));
    }
    void raise_collected() const {
        if (problems_.empty()) return;
        std::string all;
        for (const auto& p : problems_) all += (all.empty() ? "" : "\n") + p;
        throw ConfigError(all);
    }

    void check_keys(const json& obj, const std::string& pointer, const std::set<std::string>& allowed) const {
        if (!obj.is_object()) fail(pointer, "expected an object");
        for (const auto& [key, value] : obj.items()) {
            (void)value;
            if (!allowed.count(key)) fail(pointer + "/" + key, "unknown key");
        }
    }

    double number(const json& v, const std::string& pointer) const {
        if (!v.is_number()) fail(pointer, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(pointer, "expected a finite number");
        return x;
    }
    std::size_t count(const json& v, const std::string& pointer) const {
        if (!v.is_number_integer() || v.get<long long>() < 0) fail(pointer, "expected a non-negative integer");
        return static_cast<std::size_t>(v.get<long long>());
    }
    bool flag(const json& v, const std::string& pointer) const {
        if (!v.is_boolean()) fail(pointer, "expected true or false");
        return v.get<bool>();
    }
    std::string text(const json& v, const std::string& pointer) const {
        if (!v.is_string()) fail(pointer, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> grid(const json& v, const std::string& pointer) const {
        std::vector<double> out;
        if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], pointer + "/" + std::to_string(i)));
        } else if (v.is_object()) {
            check_keys(v, pointer, {"min", "max", "points", "spacing"});
            for (const char* key : {"min", "max", "points"})
                if (!v.contains(key)) fail(pointer, fmt::format("missing key '{}'", key));
            const double lo = number(v["min"], pointer + "/min");
            const double hi = number(v["max"], pointer + "/max");
            const std::size_t n = count(v["points"], pointer + "/points");
            const std::string spacing = v.contains("spacing") ? text(v["spacing"], pointer + "/spacing") : "log";
            if (n == 0) fail(pointer + "/points", "must be at least 1");
            if (hi < lo) fail(pointer + "/max", "must not be below min");
            if (spacing == "log") {
                if (lo <= 0.0) fail(pointer + "/min", "log spacing needs a positive min");
                out = log_grid(lo, hi, n);
            } else if (spacing == "linear") {
                for (std::size_t i = 0; i < n; ++i)
                    out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
            } else {
                fail(pointer + "/spacing", "expected \"log\" or \"linear\"");
            }
        } else {
            fail(pointer, "expected a list of numbers or {min, max, points, spacing}");
        }
        if (out.empty()) fail(pointer, "grid is empty");
        return out;
    }

    std::pair<double, double> range(const json& v, const std::string& pointer) const {
        if (!v.is_array() || v.size() != 2) fail(pointer, "expected [min, max]");
        const double lo = number(v[0], pointer + "/0");
        const double hi = number(v[1], pointer + "/1");
        if (!(lo > 0.0 && hi >= lo)) fail(pointer, "expected 0 < min <= max");
        return {lo, hi};
    }

    void network_fields(const json& obj, const std::string& pointer, NetworkConfig& cfg) const {
        auto at = [&](const char* key) { return pointer + "/" + key; };
        if (obj.contains("d")) cfg.d = count(obj["d"], at("d"));
        if (obj.contains("k")) cfg.k = count(obj["k"], at("k"));
        if (obj.contains("s")) cfg.s = number(obj["s"], at("s"));
        if (obj.contains("xi")) cfg.xi = number(obj["xi"], at("xi"));
        if (obj.contains("alpha")) cfg.alpha = number(obj["alpha"], at("alpha"));
        if (obj.contains("theta")) cfg.theta = number(obj["theta"], at("theta"));
        if (obj.contains("eta")) {
            if (obj["eta"].is_null()) cfg.eta.reset();
            else cfg.eta = number(obj["eta"], at("eta"));
        }
        try {
            if (obj.contains("ancilla")) cfg.ancilla = parse_ancilla_kind(text(obj["ancilla"], at("ancilla")));
        } catch (const ConfigError& e) {
            fail(at("ancilla"), strip_field(e.what()));
        }
        try {
            if (obj.contains("basis")) cfg.basis = parse_basis(text(obj["basis"], at("basis")));
        } catch (const ConfigError& e) {
            fail(at("basis"), strip_field(e.what()));
        }
        try {
            if (obj.contains("topology")) cfg.topology = parse_topology(text(obj["topology"], at("topology")));
        } catch (const ConfigError& e) {
            fail(at("topology"), strip_field(e.what()));
        }
    }

    void network_issues(const NetworkConfig& cfg, const std::string& pointer) {
        for (const auto& issue : cfg.issues()) {
            const std::string field = pointer + "/" + issue.field;
            collect(lines_.count(field) ? field : pointer, issue.message);
        }
    }

private:
    std::size_t line_of(std::string pointer) const {
        while (true) {
            auto it = lines_.find(pointer);
            if (it != lines_.end()) return it->second;
            const auto slash = pointer.rfind('/');
            if (slash == std::string::npos || pointer.empty()) return 1;
            pointer.erase(slash);
        }
    }
    static std::string dotted(const std::string& pointer) {
        if (pointer.empty()) return "(root)";
        std::string out = pointer.substr(1);
        std::replace(out.begin(), out.end(), '/', '.');
        return out;
    }

    std::string origin_;
    std::map<std::string, std::size_t> lines_;
    std::vector<std::string> problems_;
};

const std::set<std::string> kNetworkKeys = {"d", "k", "ancilla", "s", "xi", "alpha", "theta", "basis", "eta", "topology"};

}  // namespace

RunConfig parse_run_config(std::string_view text, std::string_view origin) {
    json root;
    std::size_t line = 1;
    LocatingHandler handler(root, &line);
    LineCountingIterator first(text.data(), &line);
    LineCountingIterator last(text.data() + text.size(), &line);
    if (!json::sax_parse(first, last, &handler)) {
        throw ConfigError(fmt::format("{}:{}: malformed JSON: {}", origin, handler.error_line(), handler.error()));
    }

    ConfigReader reader(std::string(origin), handler.take_lines());
    reader.check_keys(root, "", {"network", "scan", "sweep", "heralds", "threads"});

    RunConfig out;
    out.origin = std::string(origin);
    out.text = std::string(text);
    out.herald_threshold = kDefaultHeraldThreshold;

    if (!root.contains("network")) reader.fail("", "missing section 'network'");
    reader.check_keys(root["network"], "/network", kNetworkKeys);
    reader.network_fields(root["network"], "/network", out.network);
    reader.network_issues(out.network, "/network");

    if (root.contains("threads")) {
        out.threads = reader.count(root["threads"], "/threads");
        if (out.threads == 0) reader.collect("/threads", "must be at least 1");
    }

    if (root.contains("heralds")) {
        reader.check_keys(root["heralds"], "/heralds", {"threshold"});
        if (root["heralds"].contains("threshold")) {
            out.herald_threshold = reader.number(root["heralds"]["threshold"], "/heralds/threshold");
            if (!(out.herald_threshold > 0.0 && out.herald_threshold <= 1.0))
                reader.collect("/heralds/threshold", "must lie in (0, 1]");
        }
    }

    if (root.contains("scan")) {
        const json& scan = root["scan"];
        reader.check_keys(scan, "/scan", {"s", "ancilla"});
        ScanSettings settings;
        if (!scan.contains("s")) reader.fail("/scan", "missing key 's'");
        settings.s_grid = reader.grid(scan["s"], "/scan/s");
        if (scan.contains("ancilla")) settings.ancilla_grid = reader.grid(scan["ancilla"], "/scan/ancilla");
        else settings.ancilla_grid = {out.network.ancilla_parameter()};
        for (double v : settings.s_grid)
            if (v < 0.0) reader.collect("/scan/s", fmt::format("value {} is negative", v));
        for (double v : settings.ancilla_grid)
            if (v < 0.0) reader.collect("/scan/ancilla", fmt::format("value {} is negative", v));
        out.scan = std::move(settings);
    }

    if (root.contains("sweep")) {
        const json& sweep = root["sweep"];
        reader.check_keys(sweep, "/sweep",
                          {"theta", "series", "coarse_points", "refine_rounds", "refine_points", "shrink", "warm_start"});
        SweepSettings settings;
        if (!sweep.contains("theta")) reader.fail("/sweep", "missing key 'theta'");
        settings.thetas = reader.grid(sweep["theta"], "/sweep/theta");
        for (std::size_t i = 0; i < settings.thetas.size(); ++i) {
            if (settings.thetas[i] < 0.0)
                reader.collect("/sweep/theta", fmt::format("theta={} is negative", settings.thetas[i]));
            if (i > 0 && settings.thetas[i] <= settings.thetas[i - 1])
                reader.collect("/sweep/theta", "theta values must be strictly increasing");
        }
        if (sweep.contains("coarse_points"))
            settings.options.coarse_points = reader.count(sweep["coarse_points"], "/sweep/coarse_points");
        if (sweep.contains("refine_rounds"))
            settings.options.refine_rounds = reader.count(sweep["refine_rounds"], "/sweep/refine_rounds");
        if (sweep.contains("refine_points"))
            settings.options.refine_points = reader.count(sweep["refine_points"], "/sweep/refine_points");
        if (sweep.contains("shrink")) settings.options.shrink = reader.number(sweep["shrink"], "/sweep/shrink");
        if (sweep.contains("warm_start")) settings.warm_start = reader.flag(sweep["warm_start"], "/sweep/warm_start");
        if (settings.options.coarse_points < 2) reader.collect("/sweep/coarse_points", "must be at least 2");
        if (settings.options.refine_points < 2) reader.collect("/sweep/refine_points", "must be at least 2");
        if (!(settings.options.shrink > 1.0)) reader.collect("/sweep/shrink", "must exceed 1");

        if (!sweep.contains("series") || !sweep["series"].is_array() || sweep["series"].empty())
            reader.fail("/sweep/series", "expected a non-empty list of series");
        std::set<std::string> labels;
        for (std::size_t i = 0; i < sweep["series"].size(); ++i) {
            const std::string at = "/sweep/series/" + std::to_string(i);
            const json& entry = sweep["series"][i];
            std::set<std::string> keys = kNetworkKeys;
            keys.insert({"label", "s_bounds", "ancilla_bounds"});
            reader.check_keys(entry, at, keys);
            SweepSeries series;
            series.network = out.network;
            reader.network_fields(entry, at, series.network);
            series.network.theta = 0.0;
            reader.network_issues(series.network, at);
            series.bounds = OptBounds::defaults_for(series.network.ancilla);
            if (entry.contains("s_bounds"))
                std::tie(series.bounds.s_min, series.bounds.s_max) = reader.range(entry["s_bounds"], at + "/s_bounds");
            if (entry.contains("ancilla_bounds"))
                std::tie(series.bounds.ancilla_min, series.bounds.ancilla_max) =
                    reader.range(entry["ancilla_bounds"], at + "/ancilla_bounds");
            series.label = entry.contains("label")
                               ? reader.text(entry["label"], at + "/label")
                               : fmt::format("d{}_k{}_{}", series.network.d, series.network.k,
                                             to_string(series.network.ancilla));
            if (series.label.empty() ||
                series.label.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.") !=
                    std::string::npos)
                reader.collect(at + "/label", fmt::format("label '{}' must be a non-empty file-name token", series.label));
            if (!labels.insert(series.label).second)
                reader.collect(at + "/label", fmt::format("duplicate series label '{}'", series.label));
            settings.series.push_back(std::move(series));
        }
        out.sweep = std::move(settings);
    }

    reader.raise_collected();
    return out;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("{}: cannot open configuration file", path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str(), path);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw NumericalError("SHA-256 digest failed");
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
}

}  // namespace qnet
