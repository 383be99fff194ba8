/*
Copyright 2026 the vandiv authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

#include "vandiv/divisors.hpp"
#include "vandiv/identities.hpp"
#include "vandiv/vandermonde.hpp"

namespace vandiv {

enum class OutputFormat { csv, jsonl };

struct Config {
    std::uint64_t exact_cap = kDefaultExactCap;      // divisor-count threshold for exact V
    double float_tol = 1e-9;                         // relative tolerance for float assertions
    OutputFormat output_format = OutputFormat::csv;
    unsigned thread_count = 0;                       // 0 = hardware concurrency
    std::uint64_t eq1_bitsize_cap = kDefaultEq1BitCap;
    std::uint64_t divisor_cap = kDefaultDivisorCap;
    double lower_ratio_floor = 0.0;                  // record-only by default
};

inline void validate(const Config& config) {
    if (config.exact_cap == 0 || config.eq1_bitsize_cap == 0 || config.divisor_cap == 0)
        throw std::invalid_argument("config: caps must be positive");
    if (!(config.float_tol > 0.0) || config.float_tol > 1e-3)
        throw std::invalid_argument("config: float_tol must lie in (0, 1e-3]");
}

inline OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "jsonl") return OutputFormat::jsonl;
    throw std::invalid_argument("config: output_format must be csv or jsonl");
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r\n");
    if (from == std::string::npos) return {};
    const auto to = s.find_last_not_of(" \t\r\n");
    return s.substr(from, to - from + 1);
}

inline std::uint64_t parse_u64_field(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + value + "'");
    }
}

inline double parse_double_field(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
    }
}

}  // namespace detail

/// Applies `key = value` lines from a config file on top of `base`.
/// '#' starts a comment; blank lines are ignored; unknown keys are errors.
inline Config load_config_file(const std::string& path, Config base = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = detail::trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not key = value");
        const std::string key = detail::trim(text.substr(0, eq));
        const std::string value = detail::trim(text.substr(eq + 1));
        if (key == "exact_cap") base.exact_cap = detail::parse_u64_field(key, value);
        else if (key == "float_tol") base.float_tol = detail::parse_double_field(key, value);
        else if (key == "output_format") base.output_format = parse_output_format(value);
        else if (key == "thread_count")
            base.thread_count = static_cast<unsigned>(detail::parse_u64_field(key, value));
        else if (key == "eq1_bitsize_cap") base.eq1_bitsize_cap = detail::parse_u64_field(key, value);
        else if (key == "divisor_cap") base.divisor_cap = detail::parse_u64_field(key, value);
        else if (key == "lower_ratio_floor")
            base.lower_ratio_floor = detail::parse_double_field(key, value);
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    validate(base);
    return base;
}

/// VANDIV_THREADS overrides the configured thread count.
inline void apply_env(Config& config) {
    if (const char* env = std::getenv("VANDIV_THREADS")) {
        config.thread_count =
            static_cast<unsigned>(detail::parse_u64_field("VANDIV_THREADS", env));
    }
}

}  // namespace vandiv
