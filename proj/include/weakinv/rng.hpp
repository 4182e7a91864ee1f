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
#include <random>

#include "weakinv/operator_core.hpp"

namespace weakinv {

/// Repository-wide seedable generator: std::mt19937_64 (the 64-bit Mersenne
/// Twister, fully specified by the C++ standard) with a hand-rolled
/// Box-Muller transform so Gaussian draws do not depend on the standard
/// library's unspecified std::normal_distribution algorithm. Same seed,
/// same stream, bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi] via rejection-free modulo of a 64-bit
    /// draw; bias is negligible for the small ranges used here.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Standard normal via Box-Muller; pairs are cached.
    double normal();

    /// Standard complex Gaussian entry (unit-variance real and imaginary parts).
    Complex complex_normal() { return Complex(normal(), normal()); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Haar-distributed unitary: complex Ginibre matrix, Householder QR, then
/// column phases fixed so the triangular factor has positive real diagonal.
ComplexMatrix haar_unitary(Eigen::Index n, Rng& rng);

/// Random Hermitian matrix (GUE-style), normalized to unit Frobenius norm.
HermitianOperator random_hermitian(Eigen::Index n, Rng& rng);

/// Random full-rank density matrix: Wishart plus a ridge, trace-normalized.
DensityMatrix random_density(Eigen::Index n, Rng& rng);

/// Haar-random unit vector.
ComplexVector random_unit_vector(Eigen::Index n, Rng& rng);

}  // namespace weakinv
