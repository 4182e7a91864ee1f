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

#include "weakinv/operator_core.hpp"

#include <cmath>
#include <sstream>

namespace weakinv {

namespace detail {

void require_square(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        std::ostringstream msg;
        msg << who << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(msg.str());
    }
}

void require_finite(const ComplexMatrix& m, const char* who) {
    if (!m.allFinite()) {
        throw NumericalError(std::string(who) + ": matrix contains NaN or Inf entries");
    }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* who) {
    if (a != b) {
        std::ostringstream msg;
        msg << who << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(msg.str());
    }
}

}  // namespace detail

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m, double tolerance) : m_(std::move(m)) {
    detail::require_square(m_, "HermitianOperator");
    detail::require_finite(m_, "HermitianOperator");
    const double defect = max_abs(m_ - m_.adjoint());
    const double scale = std::max(1.0, max_abs(m_));
    if (defect > tolerance * scale) {
        std::ostringstream msg;
        msg << "HermitianOperator: hermiticity defect " << defect << " exceeds " << tolerance * scale;
        throw NumericalError(msg.str());
    }
}

DensityMatrix::DensityMatrix(HermitianOperator op, double trace_tol, double psd_tol)
    : op_(std::move(op)) {
    const ComplexMatrix& m = op_.matrix();
    const Complex tr = m.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > trace_tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: trace " << tr.real() << (tr.imag() < 0 ? "-" : "+")
            << std::abs(tr.imag()) << "i deviates from 1 beyond " << trace_tol;
        throw InvalidStateError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("DensityMatrix: eigenvalue computation failed");
    }
    const double min_ev = solver.eigenvalues().minCoeff();
    if (min_ev < -psd_tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: minimum eigenvalue " << min_ev << " below -" << psd_tol;
        throw InvalidStateError(msg.str());
    }
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double trace_tol, double psd_tol)
    : DensityMatrix(HermitianOperator(std::move(m)), trace_tol, psd_tol) {}

HermitianOperator hermitize(const ComplexMatrix& m) {
    detail::require_square(m, "hermitize");
    detail::require_finite(m, "hermitize");
    return HermitianOperator(0.5 * (m + m.adjoint().eval()));
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h) {
    const ComplexMatrix& m = h.matrix();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "spectral_decompose: eigensolver did not converge (dim " << m.rows()
            << ", Frobenius norm " << m.norm() << ", max entry " << max_abs(m) << ")";
        throw NumericalError(msg.str());
    }
    SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

    const double scale = std::max(1.0, m.norm());
    const ComplexMatrix rebuilt =
        out.eigenvectors * out.eigenvalues.asDiagonal() * out.eigenvectors.adjoint();
    const double recon = (rebuilt - m).norm();
    const double unit = (out.eigenvectors.adjoint() * out.eigenvectors -
                         ComplexMatrix::Identity(m.rows(), m.cols()))
                            .norm();
    if (recon > tol::structural * scale || unit > tol::structural) {
        std::ostringstream msg;
        msg << "spectral_decompose: accuracy contract violated (reconstruction " << recon
            << ", unitarity " << unit << ", norm " << m.norm() << ")";
        throw NumericalError(msg.str());
    }
    return out;
}

double expectation(const DensityMatrix& rho, const HermitianOperator& q) {
    detail::require_same_dim(rho.dim(), q.dim(), "expectation");
    const Complex value = (q.matrix() * rho.matrix()).trace();
    if (std::abs(value.imag()) > tol::structural * std::max(1.0, max_abs(q.matrix()))) {
        std::ostringstream msg;
        msg << "expectation: imaginary residue " << value.imag() << " on tr(Q rho)";
        throw NumericalError(msg.str());
    }
    return value.real();
}

namespace {

HermitianOperator apply_spectral_function(const SpectralDecomposition& spec,
                                          const RealVector& values,
                                          const std::function<double(double)>& f) {
    RealVector mapped(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double y = f(values[i]);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg << "matrix_function: f undefined at eigenvalue " << values[i];
            throw DomainError(msg.str());
        }
        mapped[i] = y;
    }
    ComplexMatrix out =
        spec.eigenvectors * mapped.asDiagonal() * spec.eigenvectors.adjoint();
    return hermitize(out);
}

}  // namespace

HermitianOperator matrix_function(const HermitianOperator& h,
                                  const std::function<double(double)>& f) {
    const SpectralDecomposition spec = spectral_decompose(h);
    return apply_spectral_function(spec, spec.eigenvalues, f);
}

HermitianOperator matrix_function(const DensityMatrix& rho,
                                  const std::function<double(double)>& f) {
    const SpectralDecomposition spec = spectral_decompose(rho.op());
    RealVector clipped = spec.eigenvalues;
    for (Eigen::Index i = 0; i < clipped.size(); ++i) {
        if (clipped[i] < -tol::eigenvalue_floor) {
            std::ostringstream msg;
            msg << "matrix_function: density eigenvalue " << clipped[i]
                << " below -" << tol::eigenvalue_floor;
            throw InvalidStateError(msg.str());
        }
        if (clipped[i] < 0.0) clipped[i] = 0.0;
    }
    return apply_spectral_function(spec, clipped, f);
}

DensityDiagnostics validate_density(const ComplexMatrix& m, double trace_tol, double psd_tol) {
    detail::require_square(m, "validate_density");
    DensityDiagnostics d;
    d.hermiticity_defect = max_abs(m - m.adjoint());
    d.hermitian_ok = d.hermiticity_defect <= tol::hermiticity * std::max(1.0, max_abs(m));
    d.trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
    d.trace_ok = d.trace_defect <= trace_tol;
    const ComplexMatrix sym = 0.5 * (m + m.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.info() == Eigen::Success
                           ? solver.eigenvalues().minCoeff()
                           : -std::numeric_limits<double>::infinity();
    d.psd_ok = d.min_eigenvalue >= -psd_tol;
    return d;
}

RealVector clipped_spectrum(const DensityMatrix& rho, double floor) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("clipped_spectrum: eigenvalue computation failed");
    }
    RealVector ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < -floor) {
            std::ostringstream msg;
            msg << "clipped_spectrum: eigenvalue " << ev[i] << " below -" << floor;
            throw InvalidStateError(msg.str());
        }
        if (ev[i] < 0.0) ev[i] = 0.0;
    }
    return ev;
}

}  // namespace weakinv
