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

namespace weakinv::tol {

// Central tolerance constants. Structural tolerances guard exact algebraic
// identities; dynamical tolerances guard quantities produced by fixed-step
// integration. Every operation that checks a tolerance accepts an override.

inline constexpr double structural = 1e-10;
inline constexpr double dynamical = 1e-8;

inline constexpr double hermiticity = 1e-12;
inline constexpr double unit_norm = 1e-12;

// Eigenvalues of a density matrix in [-eigenvalue_floor, 0) are clipped to
// zero before entropy-type functions; anything below raises an error.
inline constexpr double eigenvalue_floor = 1e-10;

// Kraus operators below this Frobenius norm are numerically null and dropped.
inline constexpr double null_kraus = 1e-14;

// Renyi quantities within this window of alpha = 1 dispatch to the von
// Neumann limit, which is the well-conditioned form there.
inline constexpr double alpha_unity_window = 1e-6;

}  // namespace weakinv::tol
