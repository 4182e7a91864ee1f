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
#include <iosfwd>
#include <utility>
#include <vector>

#include "weakinv/channels.hpp"
#include "weakinv/invariants.hpp"
#include "weakinv/operator_core.hpp"

namespace weakinv {

/// One dissipation term: nonnegative rate c and Lindbladian operator L(t).
/// Time-dependent rates are folded into the operator as sqrt(c(t)) L since
/// only c L^dagger L combinations enter the dynamics.
struct Dissipator {
    double rate;
    std::function<ComplexMatrix(double)> op;
};

/// Hamiltonian H(t) plus dissipation terms, generating
///   d rho/dt = -i[H, rho] - sum_i c_i (L_i^dag L_i rho + rho L_i^dag L_i - 2 L_i rho L_i^dag)
/// and the companion observable equation
///   d I/dt   = -i[H, I] + sum_i c_i (L_i^dag L_i I + I L_i^dag L_i - 2 L_i^dag I L_i).
class LindbladModel {
public:
    LindbladModel(Eigen::Index dim, std::function<ComplexMatrix(double)> hamiltonian,
                  std::vector<Dissipator> dissipators);

    /// Constant-coefficient model.
    static LindbladModel constant(const ComplexMatrix& h,
                                  std::vector<std::pair<double, ComplexMatrix>> dissipators);

    Eigen::Index dim() const noexcept { return dim_; }
    ComplexMatrix hamiltonian(double t) const;
    const std::vector<Dissipator>& dissipators() const noexcept { return dissipators_; }
    ComplexMatrix lindbladian(std::size_t i, double t) const;

private:
    Eigen::Index dim_;
    std::function<ComplexMatrix(double)> hamiltonian_;
    std::vector<Dissipator> dissipators_;
};

/// Uniform grid t0 = t_0 < ... < t_steps = t1.
struct TimeGrid {
    double t0;
    double t1;
    int steps;

    TimeGrid(double start, double end, int n);
    double dt() const noexcept { return (t1 - t0) / steps; }
    double time(int i) const noexcept { return t0 + i * dt(); }
};

ComplexMatrix rho_rhs_raw(const LindbladModel& model, const ComplexMatrix& rho, double t);
ComplexMatrix invariant_rhs_raw(const LindbladModel& model, const ComplexMatrix& i, double t);

/// d rho/dt at (rho, t); traceless within 1e-12 and Hermitian.
HermitianOperator rho_rhs(const LindbladModel& model, const DensityMatrix& rho, double t);

/// d I/dt at (I, t); note the L^dag I L ordering, opposite to the state
/// equation.
HermitianOperator invariant_rhs(const LindbladModel& model, const HermitianOperator& i,
                                double t);

/// Short-time Kraus family: V_0 = I - i dt H - dt sum_i c_i L_i^dag L_i and
/// V_i = sqrt(2 c_i dt) L_i. Its trace-preserving defect shrinks at least as
/// dt^1.5 under step halving (quadratically for this truncation).
KrausChannel kraus_step(const LindbladModel& model, double t, double dt);

/// 2 sum_i c_i <[L_i^dag, L_i]>; lower bound for dS/dt.
double entropy_rate_bound(const LindbladModel& model, const DensityMatrix& rho, double t);

/// 2 sum_i c_i <[L_i^dag, L_i]>_alpha for alpha in (0, 2]; lower bound for
/// dS_alpha/dt. Near alpha = 1 dispatches to entropy_rate_bound.
double renyi_rate_bound(const LindbladModel& model, const DensityMatrix& rho, double alpha,
                        double t, double floor = tol::eigenvalue_floor);

/// Entry (K, K'): sum_i c_i <[L_i, I_K]^dag [L_i, I_K'] + [L_i, I_K']^dag [L_i, I_K]>.
/// Symmetric; the diagonal is nonnegative for any (not necessarily normal) L_i.
RealMatrix covariance_rate(const LindbladModel& model, const DensityMatrix& rho,
                           const InvariantSet& set, double t);

/// 2 sum_i c_i <[L_i, I]^dag [L_i, I]> >= 0; the (K, K) diagonal of
/// covariance_rate.
double variance_rate(const LindbladModel& model, const DensityMatrix& rho,
                     const HermitianOperator& i, double t);

enum class PsdPolicy {
    fail,     // eigenvalue below -psd_tol aborts with the failing step
    project,  // clip negative eigenvalues, renormalize, log the projection
};

struct IntegrateOptions {
    PsdPolicy psd_policy = PsdPolicy::fail;
    double psd_tol = tol::dynamical;
    std::vector<double> renyi_alphas = {0.5, 1.5, 2.0};
};

/// Per-time-point observable record.
struct StepRecord {
    double t = 0.0;
    std::vector<double> expectations;    // one per invariant
    std::vector<double> variances;       // one per invariant
    RealMatrix covariance;               // K x K
    RealMatrix covariance_rate;          // K x K, evaluated from the formula
    double entropy = 0.0;                // von Neumann
    std::vector<double> renyi_entropies; // one per alpha
    double entropy_bound = 0.0;
    std::vector<double> renyi_bounds;    // one per alpha
};

struct Trajectory {
    TimeGrid grid;
    std::vector<double> renyi_alphas;
    std::vector<DensityMatrix> states;                          // per time point
    std::vector<std::vector<HermitianOperator>> invariant_series;  // [member][time]
    std::vector<StepRecord> records;
    double max_expectation_drift = 0.0;
    int projection_count = 0;
    std::vector<int> projected_steps;
};

/// All per-step observables at one time point.
StepRecord record_observables(const LindbladModel& model, const DensityMatrix& rho,
                              const InvariantSet& invariants, double t,
                              const std::vector<double>& renyi_alphas);

/// Classical fixed-step 4th-order co-integration of the state and every
/// invariant on the same grid, with per-step observables and conservation
/// diagnostics. Time-dependent coefficients are sampled at the stage times.
Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0,
                     const InvariantSet& invariants0, const TimeGrid& grid,
                     const IntegrateOptions& options = {});

/// Fixed CSV layout: t, expectation.K, variance.K, cov.K.Kp (upper
/// triangle), S, S_alpha.{alpha}, bound_vn, bound_renyi.{alpha}.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace weakinv
