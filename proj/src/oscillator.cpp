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

#include "weakinv/oscillator.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "weakinv/csv.hpp"

namespace weakinv::osc {

namespace {

constexpr Complex kImaginary{0.0, 1.0};
constexpr double kKdotSlack = 1e-14;

double frob(const ComplexMatrix& m) { return m.norm(); }

}  // namespace

ComplexMatrix SU11Basis::interior_block(const ComplexMatrix& m) const {
    const Eigen::Index d = interior_dim();
    return m.topLeftCorner(d, d);
}

SU11Basis build_su11(Eigen::Index fock_dim, int margin) {
    if (fock_dim < 8) throw ConfigError("build_su11: need at least 8 Fock levels");
    if (margin < 4) throw ConfigError("build_su11: margin must be at least 4");
    if (fock_dim - margin < 2) throw ConfigError("build_su11: margin leaves no interior");

    ComplexMatrix lower = ComplexMatrix::Zero(fock_dim, fock_dim);
    for (Eigen::Index n = 1; n < fock_dim; ++n) {
        lower(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    const ComplexMatrix raise = lower.adjoint();
    const ComplexMatrix x = (lower + raise) / std::sqrt(2.0);
    const ComplexMatrix p = kImaginary * (raise - lower) / std::sqrt(2.0);

    SU11Basis basis{fock_dim, margin, hermitize(0.5 * (p * p)), hermitize(0.5 * (x * x)),
                    hermitize(0.5 * (p * x + x * p))};

    // The defining commutators must close on the interior block.
    const ComplexMatrix c12 =
        basis.k1.matrix() * basis.k2.matrix() - basis.k2.matrix() * basis.k1.matrix();
    const ComplexMatrix c23 =
        basis.k2.matrix() * basis.k3.matrix() - basis.k3.matrix() * basis.k2.matrix();
    const ComplexMatrix c31 =
        basis.k3.matrix() * basis.k1.matrix() - basis.k1.matrix() * basis.k3.matrix();
    const double scale = frob(basis.k1.matrix()) * frob(basis.k2.matrix());
    const double d12 = frob(basis.interior_block(c12 + kImaginary * basis.k3.matrix()));
    const double d23 = frob(basis.interior_block(c23 - 2.0 * kImaginary * basis.k2.matrix()));
    const double d31 = frob(basis.interior_block(c31 - 2.0 * kImaginary * basis.k1.matrix()));
    if (d12 > 1e-8 * scale || d23 > 1e-8 * scale || d31 > 1e-8 * scale) {
        std::ostringstream msg;
        msg << "build_su11: interior commutator defects " << d12 << ", " << d23 << ", " << d31;
        throw NumericalError(msg.str());
    }
    return basis;
}

StiffnessSchedule exponential_schedule(double k0, double lambda) {
    if (k0 < 0.0 || lambda < 0.0) {
        throw InvalidScheduleError("exponential_schedule: k0 and lambda must be nonnegative");
    }
    return {"exp", [k0, lambda](double t) { return k0 * std::exp(-lambda * t); },
            [k0, lambda](double t) { return -lambda * k0 * std::exp(-lambda * t); }};
}

StiffnessSchedule rational_schedule(double k0, double lambda) {
    if (k0 < 0.0 || lambda < 0.0) {
        throw InvalidScheduleError("rational_schedule: k0 and lambda must be nonnegative");
    }
    return {"rational", [k0, lambda](double t) { return k0 / (1.0 + lambda * t); },
            [k0, lambda](double t) {
                const double denom = 1.0 + lambda * t;
                return -k0 * lambda / (denom * denom);
            }};
}

double dissipation_rate(const StiffnessSchedule& schedule, double t) {
    const double k = schedule.k(t);
    const double kdot = schedule.kdot(t);
    if (k < 0.0) {
        std::ostringstream msg;
        msg << "schedule '" << schedule.name << "': k(" << t << ") = " << k << " is negative";
        throw InvalidScheduleError(msg.str());
    }
    if (kdot > kKdotSlack) {
        std::ostringstream msg;
        msg << "schedule '" << schedule.name << "': kdot(" << t << ") = " << kdot
            << " is positive; the dissipative construction needs kdot <= 0";
        throw InvalidScheduleError(msg.str());
    }
    return std::max(0.0, -0.5 * kdot);
}

HermitianOperator hamiltonian(const SU11Basis& basis, double kval) {
    if (kval < 0.0) throw DomainError("hamiltonian: stiffness must be nonnegative");
    return hermitize(basis.k1.matrix() + kval * basis.k2.matrix());
}

LindbladModel gkls_model(const SU11Basis& basis, const StiffnessSchedule& schedule) {
    const ComplexMatrix k1 = basis.k1.matrix();
    const ComplexMatrix k2 = basis.k2.matrix();
    auto h = [k1, k2, schedule](double t) -> ComplexMatrix {
        const double k = schedule.k(t);
        if (k < 0.0) {
            std::ostringstream msg;
            msg << "gkls_model: k(" << t << ") = " << k << " is negative";
            throw InvalidScheduleError(msg.str());
        }
        return k1 + k * k2;
    };
    auto l = [k2, schedule](double t) -> ComplexMatrix {
        return std::sqrt(dissipation_rate(schedule, t)) * k2;
    };
    std::vector<Dissipator> dissipators;
    dissipators.push_back({1.0, std::move(l)});
    return LindbladModel(basis.fock_dim, std::move(h), std::move(dissipators));
}

CoefficientVector coefficient_rhs(const CoefficientVector& alpha, double t,
                                  const StiffnessSchedule& schedule) {
    const double k = schedule.k(t);
    const double kdot = schedule.kdot(t);
    return {-2.0 * alpha.alpha3, kdot * alpha.alpha1 + 2.0 * k * alpha.alpha3,
            k * alpha.alpha1 - alpha.alpha2};
}

Eigen::Matrix3d coefficient_matrix(const StiffnessSchedule& schedule, double t) {
    Eigen::Matrix3d a;
    a << 0.0, 0.0, -2.0,
        schedule.kdot(t), 0.0, 2.0 * schedule.k(t),
        schedule.k(t), -1.0, 0.0;
    return a;
}

std::vector<CoefficientVector> propagate_coefficients(const CoefficientVector& alpha0,
                                                      const TimeGrid& grid,
                                                      const StiffnessSchedule& schedule) {
    std::vector<CoefficientVector> out;
    out.reserve(grid.steps + 1);
    Eigen::Vector3d y(alpha0.alpha1, alpha0.alpha2, alpha0.alpha3);
    out.push_back(alpha0);
    const double dt = grid.dt();
    for (int s = 0; s < grid.steps; ++s) {
        const double t = grid.time(s);
        const auto f = [&schedule](const Eigen::Vector3d& v, double tt) -> Eigen::Vector3d {
            return coefficient_matrix(schedule, tt) * v;
        };
        const Eigen::Vector3d k1 = f(y, t);
        const Eigen::Vector3d k2 = f(y + 0.5 * dt * k1, t + 0.5 * dt);
        const Eigen::Vector3d k3 = f(y + 0.5 * dt * k2, t + 0.5 * dt);
        const Eigen::Vector3d k4 = f(y + dt * k3, t + dt);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back({y[0], y[1], y[2]});
    }
    return out;
}

std::vector<CoefficientVector> propagate_coefficients_expm(const CoefficientVector& alpha0,
                                                           const TimeGrid& grid,
                                                           const StiffnessSchedule& schedule) {
    std::vector<CoefficientVector> out;
    out.reserve(grid.steps + 1);
    Eigen::Vector3d y(alpha0.alpha1, alpha0.alpha2, alpha0.alpha3);
    out.push_back(alpha0);
    const double dt = grid.dt();
    for (int s = 0; s < grid.steps; ++s) {
        const double t_mid = grid.time(s) + 0.5 * dt;
        const Eigen::Matrix3d step = (coefficient_matrix(schedule, t_mid) * dt).exp();
        y = step * y;
        out.push_back({y[0], y[1], y[2]});
    }
    return out;
}

HermitianOperator invariant_from_coefficients(const CoefficientVector& alpha,
                                              const SU11Basis& basis) {
    return hermitize(alpha.alpha1 * basis.k1.matrix() + alpha.alpha2 * basis.k2.matrix() +
                     alpha.alpha3 * basis.k3.matrix());
}

ComplexVector coherent_amplitudes(Eigen::Index fock_dim, double amplitude) {
    if (fock_dim < 1) throw DimensionError("coherent_amplitudes: empty ladder");
    ComplexVector amps(fock_dim);
    double value = std::exp(-0.5 * amplitude * amplitude);
    amps[0] = value;
    for (Eigen::Index n = 1; n < fock_dim; ++n) {
        value *= amplitude / std::sqrt(static_cast<double>(n));
        amps[n] = value;
    }
    const double norm = amps.norm();
    if (norm == 0.0) throw NumericalError("coherent_amplitudes: zero norm");
    return amps / norm;
}

RealVector thermal_weights(Eigen::Index fock_dim, double nbar, Eigen::Index cutoff) {
    if (fock_dim < 1) throw DimensionError("thermal_weights: empty ladder");
    if (nbar < 0.0) throw DomainError("thermal_weights: nbar must be nonnegative");
    if (cutoff < 0 || cutoff >= fock_dim) throw DomainError("thermal_weights: bad cutoff");
    RealVector w = RealVector::Zero(fock_dim);
    const double q = nbar / (1.0 + nbar);
    double value = 1.0;
    double total = 0.0;
    for (Eigen::Index n = 0; n <= cutoff; ++n) {
        w[n] = value;
        total += value;
        value *= q;
    }
    return w / total;
}

namespace {

ComplexMatrix rk4_matrix_step(const std::function<ComplexMatrix(const ComplexMatrix&, double)>& f,
                              const ComplexMatrix& y, double t, double dt) {
    const ComplexMatrix k1 = f(y, t);
    const ComplexMatrix k2 = f(y + 0.5 * dt * k1, t + 0.5 * dt);
    const ComplexMatrix k3 = f(y + 0.5 * dt * k2, t + 0.5 * dt);
    const ComplexMatrix k4 = f(y + dt * k3, t + dt);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double max_abs_coeff_gap(const CoefficientVector& a, const CoefficientVector& b) {
    return std::max({std::abs(a.alpha1 - b.alpha1), std::abs(a.alpha2 - b.alpha2),
                     std::abs(a.alpha3 - b.alpha3)});
}

}  // namespace

CrossValidationReport cross_validate(const SU11Basis& basis, const StiffnessSchedule& schedule,
                                     const CoefficientVector& alpha0, const TimeGrid& grid,
                                     const DensityMatrix& rho0, Trajectory* trajectory_out) {
    detail::require_same_dim(basis.fock_dim, rho0.dim(), "cross_validate");
    const LindbladModel model = gkls_model(basis, schedule);
    const double dt = grid.dt();
    const std::vector<double> record_alphas = {0.5, 1.5, 2.0};
    if (trajectory_out) {
        *trajectory_out = Trajectory{grid, record_alphas, {}, {}, {}, 0.0, 0, {}};
        trajectory_out->states.reserve(grid.steps + 1);
        trajectory_out->invariant_series.assign(2, {});
        trajectory_out->records.reserve(grid.steps + 1);
    }

    CrossValidationReport report;

    // Schedule scan: validity plus the zero-kdot flag.
    for (int s = 0; s <= 2 * grid.steps; ++s) {
        const double t = grid.t0 + 0.5 * s * dt;
        dissipation_rate(schedule, t);  // raises on violations
        if (std::abs(schedule.kdot(t)) <= kKdotSlack) report.schedule_has_zero_kdot = true;
    }

    // Truncation-leakage guard on the initial state.
    const Eigen::Index guard_start =
        std::max<Eigen::Index>(0, basis.fock_dim - basis.interior_margin - 4);
    double leakage = 0.0;
    for (Eigen::Index n = guard_start; n < basis.fock_dim; ++n) {
        leakage += rho0.matrix()(n, n).real();
    }
    report.initial_leakage = leakage;
    if (leakage > 1e-8) {
        std::ostringstream msg;
        msg << "cross_validate: initial population " << leakage << " above level "
            << guard_start - 1 << " exceeds 1e-8; truncated results would not certify";
        throw TruncationLeakageError(msg.str());
    }

    // Coefficient paths: the Hamiltonian solution and the requested one,
    // each with the independent exponential cross-check.
    const CoefficientVector alpha_h0{1.0, schedule.k(grid.t0), 0.0};
    const auto alpha_h = propagate_coefficients(alpha_h0, grid, schedule);
    const auto alpha_i2 = propagate_coefficients(alpha0, grid, schedule);
    const auto alpha_h_x = propagate_coefficients_expm(alpha_h0, grid, schedule);
    const auto alpha_i2_x = propagate_coefficients_expm(alpha0, grid, schedule);
    for (int s = 0; s <= grid.steps; ++s) {
        report.coefficient_cross_check =
            std::max({report.coefficient_cross_check,
                      max_abs_coeff_gap(alpha_h[s], alpha_h_x[s]),
                      max_abs_coeff_gap(alpha_i2[s], alpha_i2_x[s])});
        const CoefficientVector fixed{1.0, schedule.k(grid.time(s)), 0.0};
        report.fixed_solution_drift =
            std::max(report.fixed_solution_drift, max_abs_coeff_gap(alpha_h[s], fixed));
    }

    // Operator path, integrated backward from the coefficient seed at t1.
    const auto backward_series = [&](const std::vector<CoefficientVector>& alphas) {
        std::vector<ComplexMatrix> series(grid.steps + 1);
        ComplexMatrix j = invariant_from_coefficients(alphas.back(), basis).matrix();
        series[grid.steps] = j;
        const auto f = [&](const ComplexMatrix& y, double tau) {
            return (-invariant_rhs_raw(model, y, grid.t1 - tau)).eval();
        };
        for (int s = 0; s < grid.steps; ++s) {
            j = rk4_matrix_step(f, j, s * dt, dt);
            j = 0.5 * (j + j.adjoint().eval());
            series[grid.steps - 1 - s] = j;
        }
        return series;
    };
    const auto i_h_series = backward_series(alpha_h);
    const auto i_2_series = backward_series(alpha_i2);

    // State path, integrated forward.
    report.min_variance_increment_h = std::numeric_limits<double>::infinity();
    report.min_variance_increment_i2 = std::numeric_limits<double>::infinity();
    report.min_rate_diag = std::numeric_limits<double>::infinity();

    ComplexMatrix rho = rho0.matrix();
    const auto rho_f = [&model](const ComplexMatrix& y, double t) {
        return rho_rhs_raw(model, y, t);
    };

    double e_h0 = 0.0;
    double e_i20 = 0.0;
    double prev_var_h = 0.0;
    double prev_var_i2 = 0.0;
    report.steps.reserve(grid.steps + 1);
    for (int s = 0; s <= grid.steps; ++s) {
        const double t = grid.time(s);
        rho = 0.5 * (rho + rho.adjoint().eval());
        const DensityMatrix state(HermitianOperator(rho), tol::dynamical, tol::dynamical);

        const HermitianOperator i_h(i_h_series[s]);
        const HermitianOperator i_2(i_2_series[s]);
        const InvariantSet set(basis.fock_dim, {i_h, i_2});

        CrossValidationStep rec{};
        rec.t = t;
        rec.interior_distance_h = frob(basis.interior_block(
            i_h_series[s] - invariant_from_coefficients(alpha_h[s], basis).matrix()));
        rec.interior_distance_i2 = frob(basis.interior_block(
            i_2_series[s] - invariant_from_coefficients(alpha_i2[s], basis).matrix()));
        rec.expectation_h = expectation(state, i_h);
        rec.expectation_i2 = expectation(state, i_2);
        rec.variance_h = variance(state, i_h);
        rec.variance_i2 = variance(state, i_2);
        const RealMatrix rate = covariance_rate(model, state, set, t);
        rec.min_rate_diag = std::min(rate(0, 0), rate(1, 1));

        report.max_interior_distance_h =
            std::max(report.max_interior_distance_h, rec.interior_distance_h);
        report.max_interior_distance_i2 =
            std::max(report.max_interior_distance_i2, rec.interior_distance_i2);
        report.min_rate_diag = std::min(report.min_rate_diag, rec.min_rate_diag);

        if (s == 0) {
            e_h0 = rec.expectation_h;
            e_i20 = rec.expectation_i2;
        } else {
            report.max_expectation_drift_h =
                std::max(report.max_expectation_drift_h, std::abs(rec.expectation_h - e_h0));
            report.max_expectation_drift_i2 =
                std::max(report.max_expectation_drift_i2, std::abs(rec.expectation_i2 - e_i20));
            report.min_variance_increment_h =
                std::min(report.min_variance_increment_h, rec.variance_h - prev_var_h);
            report.min_variance_increment_i2 =
                std::min(report.min_variance_increment_i2, rec.variance_i2 - prev_var_i2);
        }
        prev_var_h = rec.variance_h;
        prev_var_i2 = rec.variance_i2;
        report.steps.push_back(rec);

        if (trajectory_out) {
            trajectory_out->states.push_back(state);
            trajectory_out->invariant_series[0].push_back(i_h);
            trajectory_out->invariant_series[1].push_back(i_2);
            trajectory_out->records.push_back(
                record_observables(model, state, set, t, record_alphas));
            trajectory_out->max_expectation_drift = std::max(
                report.max_expectation_drift_h, report.max_expectation_drift_i2);
        }

        if (s < grid.steps) rho = rk4_matrix_step(rho_f, rho, t, dt);
    }
    if (grid.steps == 0) {
        report.min_variance_increment_h = 0.0;
        report.min_variance_increment_i2 = 0.0;
    }
    return report;
}

void CrossValidationReport::write_csv(std::ostream& out) const {
    out << "t,interior_distance_h,interior_distance_i2,expectation_h,expectation_i2,"
           "variance_h,variance_i2,min_rate_diag\n";
    for (const auto& s : steps) {
        out << csv::g17(s.t) << ',' << csv::g17(s.interior_distance_h) << ','
            << csv::g17(s.interior_distance_i2) << ',' << csv::g17(s.expectation_h) << ','
            << csv::g17(s.expectation_i2) << ',' << csv::g17(s.variance_h) << ','
            << csv::g17(s.variance_i2) << ',' << csv::g17(s.min_rate_diag) << '\n';
    }
}

}  // namespace weakinv::osc
