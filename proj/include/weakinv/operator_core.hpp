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

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "weakinv/errors.hpp"
#include "weakinv/tolerances.hpp"

namespace weakinv {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Square complex matrix known to be Hermitian within tolerance.
/// Houses observables, invariants I(t), Hamiltonians and Lindbladian
/// combinations; general Kraus factors stay plain ComplexMatrix.
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m, double tolerance = tol::hermiticity);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }

private:
    ComplexMatrix m_;
};

/// Hermitian, unit-trace, positive-semidefinite operator.
class DensityMatrix {
public:
    explicit DensityMatrix(HermitianOperator op, double trace_tol = tol::structural,
                           double psd_tol = tol::structural);
    explicit DensityMatrix(ComplexMatrix m, double trace_tol = tol::structural,
                           double psd_tol = tol::structural);

    const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
    const HermitianOperator& op() const noexcept { return op_; }
    Eigen::Index dim() const noexcept { return op_.dim(); }

private:
    HermitianOperator op_;
};

/// Eigen-decomposition of a Hermitian operator, eigenvalues ascending.
struct SpectralDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;  // columns, unitary
};

/// Diagnostics record for density-matrix validation. Never throws.
struct DensityDiagnostics {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;
    bool hermitian_ok = false;
    bool trace_ok = false;
    bool psd_ok = false;
    bool pass() const noexcept { return hermitian_ok && trace_ok && psd_ok; }
};

/// (M + M^dagger) / 2. Idempotent on Hermitian input.
HermitianOperator hermitize(const ComplexMatrix& m);

SpectralDecomposition spectral_decompose(const HermitianOperator& h);

/// Re tr(Q rho). The imaginary part of tr(Q rho) must vanish within
/// tolerance; a larger residue signals corrupted inputs.
double expectation(const DensityMatrix& rho, const HermitianOperator& q);

/// U diag(f(lambda)) U^dagger over the eigenbasis of h. No eigenvalue
/// clipping is applied; f must be defined on the whole spectrum.
HermitianOperator matrix_function(const HermitianOperator& h,
                                  const std::function<double(double)>& f);

/// Density-matrix overload: eigenvalues in [-eigenvalue_floor, 0) are
/// clipped to zero first; anything below the floor raises
/// InvalidStateError. Used for rho^alpha and rho ln rho.
HermitianOperator matrix_function(const DensityMatrix& rho,
                                  const std::function<double(double)>& f);

DensityDiagnostics validate_density(const ComplexMatrix& m,
                                    double trace_tol = tol::structural,
                                    double psd_tol = tol::structural);

/// Spectrum of a density matrix with the clipping policy applied:
/// values in [-floor, 0) become 0, values below -floor raise.
RealVector clipped_spectrum(const DensityMatrix& rho,
                            double floor = tol::eigenvalue_floor);

namespace detail {
void require_square(const ComplexMatrix& m, const char* who);
void require_finite(const ComplexMatrix& m, const char* who);
void require_same_dim(Eigen::Index a, Eigen::Index b, const char* who);
}  // namespace detail

}  // namespace weakinv
