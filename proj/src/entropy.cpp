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

#include "weakinv/entropy.hpp"

#include <cmath>
#include <sstream>

namespace weakinv {

double von_neumann(const DensityMatrix& rho, double floor) {
    const RealVector ev = clipped_spectrum(rho, floor);
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > 0.0) s -= ev[i] * std::log(ev[i]);
    }
    return s;
}

double renyi(const DensityMatrix& rho, double alpha, double floor) {
    if (alpha <= 0.0) {
        std::ostringstream msg;
        msg << "renyi: alpha must be positive, got " << alpha;
        throw DomainError(msg.str());
    }
    if (std::abs(alpha - 1.0) < tol::alpha_unity_window) return von_neumann(rho, floor);
    const RealVector ev = clipped_spectrum(rho, floor);
    double trace_power = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > 0.0) trace_power += std::pow(ev[i], alpha);
    }
    return std::log(trace_power) / (1.0 - alpha);
}

double linear_entropy(const DensityMatrix& rho) {
    return 1.0 - (rho.matrix() * rho.matrix()).trace().real();
}

double alpha_expectation(const DensityMatrix& rho, const HermitianOperator& q, double alpha,
                         double floor) {
    detail::require_same_dim(rho.dim(), q.dim(), "alpha_expectation");
    if (alpha <= 0.0) {
        std::ostringstream msg;
        msg << "alpha_expectation: alpha must be positive, got " << alpha;
        throw DomainError(msg.str());
    }
    if (alpha == 1.0) return expectation(rho, q);

    const SpectralDecomposition spec = spectral_decompose(rho.op());
    RealVector powered(spec.eigenvalues.size());
    double trace_power = 0.0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        double ev = spec.eigenvalues[i];
        if (ev < -floor) {
            std::ostringstream msg;
            msg << "alpha_expectation: eigenvalue " << ev << " below -" << floor;
            throw InvalidStateError(msg.str());
        }
        ev = std::max(ev, 0.0);
        powered[i] = ev > 0.0 ? std::pow(ev, alpha) : 0.0;
        trace_power += powered[i];
    }
    if (trace_power < 1e-300) {
        std::ostringstream msg;
        msg << "alpha_expectation: tr rho^alpha underflows (" << trace_power << ")";
        throw NumericalError(msg.str());
    }
    const ComplexMatrix rho_alpha =
        spec.eigenvectors * powered.asDiagonal() * spec.eigenvectors.adjoint();
    return (q.matrix() * rho_alpha).trace().real() / trace_power;
}

}  // namespace weakinv
