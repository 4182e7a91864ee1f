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
#include <iosfwd>
#include <vector>

#include "weakinv/operator_core.hpp"
#include "weakinv/rng.hpp"

namespace weakinv {

/// Completely positive map in Kraus form: rho -> sum_n V_n rho V_n^dagger.
/// The family is trace-preserving when sum_n V_n^dagger V_n = I and unital
/// when sum_n V_n V_n^dagger = I.
class KrausChannel {
public:
    KrausChannel(Eigen::Index dim, std::vector<ComplexMatrix> operators);

    Eigen::Index dim() const noexcept { return dim_; }
    const std::vector<ComplexMatrix>& operators() const noexcept { return operators_; }

    /// Frobenius defect of the trace-preserving condition.
    double trace_preserving_defect() const;
    /// Frobenius defect of the unital condition.
    double unital_defect() const;

private:
    Eigen::Index dim_;
    std::vector<ComplexMatrix> operators_;
};

struct ChannelCheck {
    bool ok;
    double defect;
};

ChannelCheck is_trace_preserving(const KrausChannel& phi, double tolerance = tol::structural);
ChannelCheck is_unital(const KrausChannel& phi, double tolerance = tol::structural);

/// Forward action sum_n V_n rho V_n^dagger. Requires a trace-preserving
/// channel within tp_tol; the output is validated as a density matrix.
DensityMatrix apply(const KrausChannel& phi, const DensityMatrix& rho,
                    double tp_tol = tol::structural, double psd_tol = tol::structural);

/// Forward action on a raw matrix with no channel or output validation.
/// Needed for families that are trace-preserving only up to O(dt^2), such
/// as one-step short-time factors.
ComplexMatrix apply_raw(const KrausChannel& phi, const ComplexMatrix& rho);

/// Adjoint (Heisenberg-picture) action sum_n V_n^dagger Q V_n. Always
/// unital for a trace-preserving family.
HermitianOperator adjoint_apply(const KrausChannel& phi, const HermitianOperator& q);

/// Adjoint action on a raw matrix, no validation.
ComplexMatrix adjoint_apply_raw(const KrausChannel& phi, const ComplexMatrix& q);

/// Kraus family of the composite map phi2 after phi1: {V2_m V1_n}.
KrausChannel compose(const KrausChannel& phi2, const KrausChannel& phi1);

/// Unitary system-environment dilation. The joint space is ordered
/// system-major: index = a * env_dim + b. The environment measurement basis
/// is the standard basis; env_state is the environment ket at the earlier
/// time (defaults to the first basis vector elsewhere).
struct DilationSpec {
    Eigen::Index sys_dim;
    Eigen::Index env_dim;
    ComplexMatrix unitary;    // (sys*env) x (sys*env), unitary within structural tol
    ComplexVector env_state;  // unit within tol::unit_norm

    DilationSpec(Eigen::Index sys, Eigen::Index env, ComplexMatrix u, ComplexVector phi);
};

/// Kraus operators V_n = <v_n| U |phi> read off a dilation.
KrausChannel kraus_from_dilation(const DilationSpec& spec);

/// Outcome probabilities p_n = tr(V_n rho V_n^dagger).
std::vector<double> povm_probabilities(const DilationSpec& spec, const DensityMatrix& rho);

/// Largest absolute gap between the dilated-space projective probabilities
/// tr(Pi_n |Psi><Psi|) with Pi_n = U^dagger (I (x) |v_n><v_n|) U and the
/// Kraus-side probabilities ||V_n psi||^2. The two sides are computed by
/// independent code paths.
double naimark_check(const DilationSpec& spec, const ComplexVector& psi);

/// Haar-random dilation with |phi> fixed to the first environment basis vector.
DilationSpec random_dilation(Eigen::Index sys_dim, Eigen::Index env_dim, std::uint64_t seed);

/// Haar-random trace-preserving channel with env_dim Kraus operators
/// (numerically null ones dropped). Deterministic for a given seed.
KrausChannel random_channel(Eigen::Index sys_dim, Eigen::Index env_dim, std::uint64_t seed);

/// Mixed-unitary (hence unital) channel sum_k p_k U_k . U_k^dagger.
KrausChannel random_mixed_unitary_channel(Eigen::Index dim, int unitary_count,
                                          std::uint64_t seed);

/// Amplitude-damping qubit channel with decay probability gamma in [0, 1].
KrausChannel amplitude_damping_channel(double gamma);

/// Lossless JSON round-trip of {dim, operators as nested [re, im] pairs}.
void save_channel(std::ostream& out, const KrausChannel& phi);
KrausChannel load_channel(std::istream& in);

}  // namespace weakinv
