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

#include <string>

#include "weakinv/config.hpp"

namespace weakinv {

// Scenario entry points. Each writes a CSV report plus a JSON summary next
// to it and returns the process exit code: 0 pass, 1 violation beyond the
// configured slack. Configuration errors and numerical failures are thrown
// (ConfigError and the numerical error family respectively); exit_code maps
// them to 2 and 3 for the command line.

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

int run_channel_audit(ConfigMap cfg);
int run_unital_entropy_audit(ConfigMap cfg);
int run_gkls(ConfigMap cfg);
int run_oscillator(ConfigMap cfg);
int run_kraus_step_study(ConfigMap cfg);

/// Dispatch on the scenario `kind` entry.
int run_scenario(ConfigMap cfg);

/// run_scenario with the command-line exit-code contract: exceptions are
/// printed to stderr and mapped to kExitConfigError / kExitNumericalError.
int run_scenario_catching(ConfigMap cfg) noexcept;

/// Path of the JSON summary written alongside a CSV report.
std::string summary_path(const std::string& csv_path);

}  // namespace weakinv
