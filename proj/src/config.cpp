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

#include "weakinv/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace weakinv {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string current;
    std::istringstream in(s);
    while (std::getline(in, current, sep)) parts.push_back(current);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') {
        throw ConfigError("config key '" + key + "': cannot parse number from '" + t + "'");
    }
    return value;
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
}

ConfigMap ConfigMap::from_string(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "config line " << lineno << ": expected 'key = value', got '" << stripped << "'";
            throw ConfigError(msg.str());
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream msg;
            msg << "config line " << lineno << ": empty key";
            throw ConfigError(msg.str());
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

void ConfigMap::set(const std::string& key, const std::string& value) { values_[key] = value; }

void ConfigMap::merge_override(const ConfigMap& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string ConfigMap::require_string(const std::string& key) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config key '" + key + "' is required");
    return it->second;
}

int ConfigMap::get_int(const std::string& key, int fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const double v = parse_double(it->second, key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + it->second + "'");
    }
    return i;
}

std::uint64_t ConfigMap::get_seed(const std::string& key, std::uint64_t fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoull(trim(it->second));
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a nonnegative integer seed");
    }
}

double ConfigMap::get_double(const std::string& key, double fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(it->second, key);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = trim(it->second);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + it->second + "'");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const auto& part : split(it->second, ',')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        out.push_back(parse_double(p, key));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::optional<ComplexMatrix> ConfigMap::find_matrix(const std::string& key) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    try {
        return parse_matrix_literal(it->second);
    } catch (const ConfigError& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

std::vector<int> ConfigMap::indexed_entries(const std::string& prefix) const {
    std::set<int> indices;
    const std::string base = prefix + ".";
    for (const auto& [k, v] : values_) {
        if (k.rfind(base, 0) != 0) continue;
        const std::string rest = k.substr(base.size());
        const auto dot = rest.find('.');
        const std::string index_text = dot == std::string::npos ? rest : rest.substr(0, dot);
        try {
            indices.insert(std::stoi(index_text));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + k + "': expected numeric index after '" + prefix +
                              ".'");
        }
    }
    return {indices.begin(), indices.end()};
}

void ConfigMap::require_all_consumed() const {
    std::vector<std::string> unknown;
    for (const auto& [k, v] : values_) {
        if (consumed_.count(k) == 0) unknown.push_back(k);
    }
    if (!unknown.empty()) {
        std::ostringstream msg;
        msg << "unknown config key(s):";
        for (const auto& k : unknown) msg << " '" << k << "'";
        throw ConfigError(msg.str());
    }
}

Complex parse_complex_entry(const std::string& text) {
    const std::string t = trim(text);
    const auto colon = t.find(':');
    if (colon == std::string::npos) {
        return Complex(parse_double(t, "matrix entry"), 0.0);
    }
    return Complex(parse_double(t.substr(0, colon), "matrix entry"),
                   parse_double(t.substr(colon + 1), "matrix entry"));
}

ComplexMatrix parse_matrix_literal(const std::string& text) {
    const auto row_texts = split(text, ';');
    if (row_texts.empty()) throw ConfigError("empty matrix literal");
    std::vector<std::vector<Complex>> rows;
    for (const auto& row_text : row_texts) {
        std::vector<Complex> row;
        for (const auto& entry : split(row_text, ',')) {
            const std::string e = trim(entry);
            if (e.empty()) throw ConfigError("empty matrix entry");
            row.push_back(parse_complex_entry(e));
        }
        rows.push_back(std::move(row));
    }
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = static_cast<Eigen::Index>(rows.front().size());
    ComplexMatrix m(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != n_cols) {
            throw ConfigError("matrix literal has ragged rows");
        }
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    return m;
}

std::vector<std::string> preset_names() {
    return {"dephasing",   "amplitude-damping", "oscillator-exp", "oscillator-rational",
            "gkls-random", "gkls-unitary",      "kraus-dephasing"};
}

ConfigMap preset_config(const std::string& name) {
    if (name == "dephasing") {
        return ConfigMap::from_string(R"(
kind = gkls-run
model = dephasing
rho0 = plus
invariant.0 = sigma_x
grid.t0 = 0
grid.t1 = 1
grid.steps = 1000
out = dephasing.csv
)");
    }
    if (name == "amplitude-damping") {
        return ConfigMap::from_string(R"(
kind = unital-entropy-audit
channels = 100
min_dim = 2
max_dim = 4
unitaries = 4
alphas = 0.5, 1.5, 2.0
nonunital_cases = 50
out = entropy_audit.csv
)");
    }
    if (name == "oscillator-exp") {
        return ConfigMap::from_string(R"(
kind = oscillator-run
n = 30
margin = 4
schedule = exp
k0 = 1
lambda = 1
alpha0 = 0.3, 0.4, 0.25
state = coherent
state.amplitude = 1.0
grid.t0 = 0
grid.t1 = 1
grid.steps = 1000
out = oscillator_exp.csv
)");
    }
    if (name == "oscillator-rational") {
        ConfigMap cfg = preset_config("oscillator-exp");
        cfg.set("schedule", "rational");
        cfg.set("out", "oscillator_rational.csv");
        return cfg;
    }
    if (name == "gkls-random") {
        return ConfigMap::from_string(R"(
kind = gkls-run
model = random
dim = 4
dissipators = 2
rho0 = random
invariant.0 = random
invariant.1 = random
grid.t0 = 0
grid.t1 = 1
grid.steps = 1000
out = gkls_random.csv
)");
    }
    if (name == "gkls-unitary") {
        return ConfigMap::from_string(R"(
kind = gkls-run
model = custom
dim = 2
hamiltonian = 1, 0; 0, -1
rho0 = 0.5, 0.2; 0.2, 0.5
invariant.0 = sigma_x
grid.t0 = 0
grid.t1 = 1
grid.steps = 1000
out = gkls_unitary.csv
)");
    }
    if (name == "kraus-dephasing") {
        return ConfigMap::from_string(R"(
kind = kraus-step-study
model = dephasing
rho0 = plus
dts = 1e-2, 5e-3, 2.5e-3, 1.25e-3
grid.t0 = 0
grid.t1 = 1
out = kraus_study.csv
)");
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace weakinv
