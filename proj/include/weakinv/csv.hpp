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

#include <cstdio>
#include <string>

namespace weakinv::csv {

/// Full-precision decimal rendering (17 significant digits, '.' separator).
inline std::string g17(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

/// Compact rendering for labels such as alpha values in column names.
inline std::string label(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%g", x);
    return buffer;
}

}  // namespace weakinv::csv
