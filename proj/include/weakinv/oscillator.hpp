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

#include <functional>
#include <string>
#include <vector>

#include "weakinv/gkls.hpp"
#include "weakinv/operator_core.hpp"

namespace weakinv::osc {

/// su(1,1) triple K1 = p^2/2, K2 = x^2/2, K3 = (px + xp)/2 on a truncated
/// Fock ladder (unit mass, hbar = 1, reference frequency 1). The algebra
/// [K1,K2] = -iK3, [K2,K3] = 2iK2, [K3,K1] = 2iK1 holds exactly only on the
/// interior block spanned by levels 0 .. N-1-margin; quartic ladder products
/// corrupt the top levels.
struct SU11Basis {
    Eigen::Index fock_dim;
    int interior_margin;
    HermitianOperator k1;
    HermitianOperator k2;
    HermitianOperator k3;

    Eigen::Index interior_dim() const noexcept { return fock_dim - interior_margin; }
    ComplexMatrix interior_block(const ComplexMatrix& m) const;
};

SU11Basis build_su11(Eigen::Index fock_dim, int margin = 4);

/// Nonnegative stiffness k(t) with analytic derivative; the dissipative
/// construction requires kdot <= 0 on the simulated interval.
struct StiffnessSchedule {
    std::string name;
    std::function<double(double)> k;
    std::function<double(double)> kdot;
};

/// k(t) = k0 exp(-lambda t).
StiffnessSchedule exponential_schedule(double k0, double lambda);
/// k(t) = k0 / (1 + lambda t).
StiffnessSchedule rational_schedule(double k0, double lambda);

/// Dissipation rate -kdot(t)/2; raises InvalidScheduleError when kdot > 0
/// or k < 0 at t.
double dissipation_rate(const StiffnessSchedule& schedule, double t);

/// H(t) = K1 + k K2.
HermitianOperator hamiltonian(const SU11Basis& basis, double kval);

/// Model with H(t) = K1 + k(t) K2 and the single dissipation term
/// (c(t) = -kdot(t)/2, L = K2), realized as rate 1 with sqrt(c(t)) K2 so
/// the state equation reproduces the double-commutator form
/// -c [K2, [K2, rho]] exactly.
LindbladModel gkls_model(const SU11Basis& basis, const StiffnessSchedule& schedule);

/// Coefficients of I = alpha1 K1 + alpha2 K2 + alpha3 K3.
struct CoefficientVector {
    double alpha1;
    double alpha2;
    double alpha3;
};

/// A(t) alpha with A = [[0, 0, -2], [kdot, 0, 2k], [k, -1, 0]].
CoefficientVector coefficient_rhs(const CoefficientVector& alpha, double t,
                                  const StiffnessSchedule& schedule);

/// The coefficient-matrix A(t) itself.
Eigen::Matrix3d coefficient_matrix(const StiffnessSchedule& schedule, double t);

/// Fourth-order integration of the coefficient equation; entry s is
/// alpha(grid.time(s)).
std::vector<CoefficientVector> propagate_coefficients(const CoefficientVector& alpha0,
                                                      const TimeGrid& grid,
                                                      const StiffnessSchedule& schedule);

/// Independent realization of the ordered exponential: left-composed
/// midpoint exponentials exp(A(t_mid) dt). Cross-check path for
/// propagate_coefficients.
std::vector<CoefficientVector> propagate_coefficients_expm(const CoefficientVector& alpha0,
                                                           const TimeGrid& grid,
                                                           const StiffnessSchedule& schedule);

HermitianOperator invariant_from_coefficients(const CoefficientVector& alpha,
                                              const SU11Basis& basis);

/// Coherent-state amplitude profile e^{-a^2/2} a^n / sqrt(n!), renormalized
/// on the truncated ladder.
ComplexVector coherent_amplitudes(Eigen::Index fock_dim, double amplitude);

/// Thermal-like diagonal weights (nbar/(1+nbar))^n up to a cutoff level.
RealVector thermal_weights(Eigen::Index fock_dim, double nbar, Eigen::Index cutoff);

struct CrossValidationStep {
    double t;
    double interior_distance_h;   // operator vs coefficient path, I1 = H
    double interior_distance_i2;  // operator vs coefficient path, I2
    double expectation_h;
    double expectation_i2;
    double variance_h;
    double variance_i2;
    double min_rate_diag;  // smallest diagonal entry of the covariance rate
};

struct CrossValidationReport {
    std::vector<CrossValidationStep> steps;
    double max_interior_distance_h = 0.0;
    double max_interior_distance_i2 = 0.0;
    double coefficient_cross_check = 0.0;  // RK4 path vs midpoint-exponential path
    double fixed_solution_drift = 0.0;     // alpha(t) = (1, k(t), 0) preservation
    double max_expectation_drift_h = 0.0;
    double max_expectation_drift_i2 = 0.0;
    double min_variance_increment_h = 0.0;
    double min_variance_increment_i2 = 0.0;
    double min_rate_diag = 0.0;
    double initial_leakage = 0.0;
    bool schedule_has_zero_kdot = false;

    void write_csv(std::ostream& out) const;
};

/// Two-path validation of the coefficient dynamics against full operator
/// dynamics, plus conservation and fluctuation-growth diagnostics along the
/// state trajectory.
///
/// The state runs forward. The operator-path invariants run backward from
/// t1 (seeded with the coefficient solution there), which is the
/// well-posed direction for the observable equation: integrated forward on
/// a truncated ladder, its dissipator amplifies truncation defects at rate
/// c (Delta K2)^2 and the far-from-diagonal components explode; pulled
/// backward the same modes contract. Truncation-edge corruption still
/// spreads into the interior block over unit times, so interior distances
/// of order one are expected and reported honestly rather than hidden.
///
/// When trajectory_out is non-null it receives the full per-step record
/// (states, both invariants, entropies, bounds) in the standard trajectory
/// layout.
CrossValidationReport cross_validate(const SU11Basis& basis, const StiffnessSchedule& schedule,
                                     const CoefficientVector& alpha0, const TimeGrid& grid,
                                     const DensityMatrix& rho0,
                                     Trajectory* trajectory_out = nullptr);

}  // namespace weakinv::osc
