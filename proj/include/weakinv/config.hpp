// Copyright 2026 The weakinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "weakinv/operator_core.hpp"

namespace weakinv {

/// Flat `key = value` scenario configuration with dotted sections and '#'
/// comments. Typed getters mark keys as consumed; a scenario must consume
/// every key or the run is rejected, so typos cannot silently change a run.
class ConfigMap {
public:
    ConfigMap() = default;

    static ConfigMap from_file(const std::string& path);
    static ConfigMap from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    /// Overlay: entries of `other` win.
    void merge_override(const ConfigMap& other);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback);
    std::string require_string(const std::string& key);
    int get_int(const std::string& key, int fallback);
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback);
    double get_double(const std::string& key, double fallback);
    bool get_bool(const std::string& key, bool fallback);
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback);

    /// Matrix literal: rows split by ';', entries by ',', each entry either
    /// `re` or `re:im`. Example qubit flip: "0,1;1,0".
    std::optional<ComplexMatrix> find_matrix(const std::string& key);

    /// Consumes and returns every index i for which key `prefix.i` or
    /// `prefix.i.*` exists (used for dissipator and invariant lists).
    std::vector<int> indexed_entries(const std::string& prefix) const;

    /// Raises ConfigError listing any keys never consumed by a getter.
    void require_all_consumed() const;

    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

/// Built-in scenario configurations, as config text: "dephasing",
/// "amplitude-damping", "oscillator-exp", "oscillator-rational",
/// "gkls-random", "gkls-unitary", "kraus-dephasing".
ConfigMap preset_config(const std::string& name);
std::vector<std::string> preset_names();

Complex parse_complex_entry(const std::string& text);
ComplexMatrix parse_matrix_literal(const std::string& text);

}  // namespace weakinv
