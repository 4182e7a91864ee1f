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

#include "weakinv/operator_core.hpp"

namespace weakinv {

// State functionals, all in natural-log units (nats). Eigenvalues in
// [-floor, 0) are clipped to zero, anything below raises; callers holding
// fixed-step integrator output pass tol::dynamical instead of the default.

/// -tr(rho ln rho) over the clipped spectrum, with 0 ln 0 := 0.
double von_neumann(const DensityMatrix& rho, double floor = tol::eigenvalue_floor);

/// (1 / (1 - alpha)) ln tr rho^alpha for alpha > 0. Inside the window
/// |alpha - 1| < tol::alpha_unity_window this dispatches to von_neumann.
double renyi(const DensityMatrix& rho, double alpha, double floor = tol::eigenvalue_floor);

/// 1 - tr rho^2. Equals 1 - exp(-S_2) with S_2 the alpha = 2 Renyi entropy.
double linear_entropy(const DensityMatrix& rho);

/// tr(Q rho^alpha) / tr rho^alpha. Reduces to expectation at alpha = 1.
double alpha_expectation(const DensityMatrix& rho, const HermitianOperator& q, double alpha,
                         double floor = tol::eigenvalue_floor);

}  // namespace weakinv
