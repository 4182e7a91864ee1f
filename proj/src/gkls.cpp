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

#include "weakinv/gkls.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "weakinv/csv.hpp"
#include "weakinv/entropy.hpp"

namespace weakinv {

namespace {

constexpr Complex kImaginary{0.0, 1.0};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

}  // namespace

LindbladModel::LindbladModel(Eigen::Index dim, std::function<ComplexMatrix(double)> hamiltonian,
                             std::vector<Dissipator> dissipators)
    : dim_(dim), hamiltonian_(std::move(hamiltonian)), dissipators_(std::move(dissipators)) {
    if (dim_ < 1) throw DimensionError("LindbladModel: dimension must be positive");
    if (!hamiltonian_) throw ConfigError("LindbladModel: missing Hamiltonian");
    for (std::size_t i = 0; i < dissipators_.size(); ++i) {
        if (dissipators_[i].rate < 0.0) {
            std::ostringstream msg;
            msg << "LindbladModel: dissipator " << i << " has negative rate "
                << dissipators_[i].rate;
            throw ConfigError(msg.str());
        }
        if (!dissipators_[i].op) {
            std::ostringstream msg;
            msg << "LindbladModel: dissipator " << i << " has no operator";
            throw ConfigError(msg.str());
        }
    }
}

LindbladModel LindbladModel::constant(const ComplexMatrix& h,
                                      std::vector<std::pair<double, ComplexMatrix>> dissipators) {
    detail::require_square(h, "LindbladModel");
    const Eigen::Index dim = h.rows();
    std::vector<Dissipator> terms;
    terms.reserve(dissipators.size());
    for (auto& [rate, op] : dissipators) {
        detail::require_square(op, "LindbladModel");
        detail::require_same_dim(op.rows(), dim, "LindbladModel");
        terms.push_back({rate, [m = std::move(op)](double) { return m; }});
    }
    return LindbladModel(dim, [hm = h](double) { return hm; }, std::move(terms));
}

ComplexMatrix LindbladModel::hamiltonian(double t) const {
    ComplexMatrix h = hamiltonian_(t);
    detail::require_square(h, "LindbladModel::hamiltonian");
    detail::require_same_dim(h.rows(), dim_, "LindbladModel::hamiltonian");
    return h;
}

ComplexMatrix LindbladModel::lindbladian(std::size_t i, double t) const {
    ComplexMatrix l = dissipators_.at(i).op(t);
    detail::require_square(l, "LindbladModel::lindbladian");
    detail::require_same_dim(l.rows(), dim_, "LindbladModel::lindbladian");
    return l;
}

TimeGrid::TimeGrid(double start, double end, int n) : t0(start), t1(end), steps(n) {
    if (!(end > start)) throw ConfigError("TimeGrid: t1 must exceed t0");
    if (n < 1) throw ConfigError("TimeGrid: steps must be at least 1");
}

ComplexMatrix rho_rhs_raw(const LindbladModel& model, const ComplexMatrix& rho, double t) {
    detail::require_same_dim(model.dim(), rho.rows(), "rho_rhs");
    ComplexMatrix out = -kImaginary * commutator(model.hamiltonian(t), rho);
    for (std::size_t i = 0; i < model.dissipators().size(); ++i) {
        const double c = model.dissipators()[i].rate;
        if (c == 0.0) continue;
        const ComplexMatrix l = model.lindbladian(i, t);
        const ComplexMatrix ldl = l.adjoint() * l;
        out -= c * (ldl * rho + rho * ldl - 2.0 * l * rho * l.adjoint());
    }
    return out;
}

ComplexMatrix invariant_rhs_raw(const LindbladModel& model, const ComplexMatrix& i_op, double t) {
    detail::require_same_dim(model.dim(), i_op.rows(), "invariant_rhs");
    ComplexMatrix out = -kImaginary * commutator(model.hamiltonian(t), i_op);
    for (std::size_t i = 0; i < model.dissipators().size(); ++i) {
        const double c = model.dissipators()[i].rate;
        if (c == 0.0) continue;
        const ComplexMatrix l = model.lindbladian(i, t);
        const ComplexMatrix ldl = l.adjoint() * l;
        out += c * (ldl * i_op + i_op * ldl - 2.0 * l.adjoint() * i_op * l);
    }
    return out;
}

HermitianOperator rho_rhs(const LindbladModel& model, const DensityMatrix& rho, double t) {
    ComplexMatrix out = rho_rhs_raw(model, rho.matrix(), t);
    const double trace_mag = std::abs(out.trace());
    if (trace_mag > 1e-12) {
        std::ostringstream msg;
        msg << "rho_rhs: generator trace residue " << trace_mag;
        throw NumericalError(msg.str());
    }
    return hermitize(out);
}

HermitianOperator invariant_rhs(const LindbladModel& model, const HermitianOperator& i, double t) {
    return hermitize(invariant_rhs_raw(model, i.matrix(), t));
}

KrausChannel kraus_step(const LindbladModel& model, double t, double dt) {
    if (dt <= 0.0) throw DomainError("kraus_step: dt must be positive");
    const Eigen::Index d = model.dim();
    ComplexMatrix v0 = ComplexMatrix::Identity(d, d) - kImaginary * dt * model.hamiltonian(t);
    std::vector<ComplexMatrix> ops;
    std::vector<ComplexMatrix> jump_ops;
    for (std::size_t i = 0; i < model.dissipators().size(); ++i) {
        const double c = model.dissipators()[i].rate;
        if (c == 0.0) continue;
        const ComplexMatrix l = model.lindbladian(i, t);
        v0 -= dt * c * (l.adjoint() * l);
        jump_ops.push_back(std::sqrt(2.0 * c * dt) * l);
    }
    ops.push_back(std::move(v0));
    for (auto& j : jump_ops) {
        if (j.norm() >= tol::null_kraus) ops.push_back(std::move(j));
    }
    return KrausChannel(d, std::move(ops));
}

double entropy_rate_bound(const LindbladModel& model, const DensityMatrix& rho, double t) {
    detail::require_same_dim(model.dim(), rho.dim(), "entropy_rate_bound");
    double bound = 0.0;
    for (std::size_t i = 0; i < model.dissipators().size(); ++i) {
        const double c = model.dissipators()[i].rate;
        if (c == 0.0) continue;
        const ComplexMatrix l = model.lindbladian(i, t);
        const ComplexMatrix comm = commutator(l.adjoint(), l);
        bound += 2.0 * c * (comm * rho.matrix()).trace().real();
    }
    return bound;
}

double renyi_rate_bound(const LindbladModel& model, const DensityMatrix& rho, double alpha,
                        double t, double floor) {
    if (alpha <= 0.0 || alpha > 2.0) {
        std::ostringstream msg;
        msg << "renyi_rate_bound: alpha must lie in (0, 2], got " << alpha;
        throw DomainError(msg.str());
    }
    if (std::abs(alpha - 1.0) < tol::alpha_unity_window) {
        return entropy_rate_bound(model, rho, t);
    }
    detail::require_same_dim(model.dim(), rho.dim(), "renyi_rate_bound");
    double bound = 0.0;
    for (std::size_t i = 0; i < model.dissipators().size(); ++i) {
        const double c = model.dissipators()[i].rate;
        if (c == 0.0) continue;
        const ComplexMatrix l = model.lindbladian(i, t);
        const HermitianOperator comm = hermitize(commutator(l.adjoint(), l));
        bound += 2.0 * c * alpha_expectation(rho, comm, alpha, floor);
    }
    return bound;
}

RealMatrix covariance_rate(const LindbladModel& model, const DensityMatrix& rho,
                           const InvariantSet& set, double t) {
    detail::require_same_dim(model.dim(), rho.dim(), "covariance_rate");
    detail::require_same_dim(model.dim(), set.dim, "covariance_rate");
    const auto k = static_cast<Eigen::Index>(set.size());
    RealMatrix rate = RealMatrix::Zero(k, k);
    for (std::size_t i = 0; i < model.dissipators().size(); ++i) {
        const double c = model.dissipators()[i].rate;
        if (c == 0.0) continue;
        const ComplexMatrix l = model.lindbladian(i, t);
        std::vector<ComplexMatrix> comms;
        comms.reserve(set.size());
        for (const auto& inv : set.members) comms.push_back(commutator(l, inv.matrix()));
        for (Eigen::Index a = 0; a < k; ++a) {
            for (Eigen::Index b = a; b < k; ++b) {
                const ComplexMatrix mixed =
                    comms[static_cast<std::size_t>(a)].adjoint() * comms[static_cast<std::size_t>(b)] +
                    comms[static_cast<std::size_t>(b)].adjoint() * comms[static_cast<std::size_t>(a)];
                const double value = c * (mixed * rho.matrix()).trace().real();
                rate(a, b) += value;
                rate(b, a) = rate(a, b);
            }
        }
    }
    return rate;
}

double variance_rate(const LindbladModel& model, const DensityMatrix& rho,
                     const HermitianOperator& i_op, double t) {
    detail::require_same_dim(model.dim(), rho.dim(), "variance_rate");
    detail::require_same_dim(model.dim(), i_op.dim(), "variance_rate");
    double rate = 0.0;
    for (std::size_t i = 0; i < model.dissipators().size(); ++i) {
        const double c = model.dissipators()[i].rate;
        if (c == 0.0) continue;
        const ComplexMatrix comm = commutator(model.lindbladian(i, t), i_op.matrix());
        rate += 2.0 * c * (comm.adjoint() * comm * rho.matrix()).trace().real();
    }
    return rate;
}

namespace {

ComplexMatrix rk4_step(const std::function<ComplexMatrix(const ComplexMatrix&, double)>& rhs,
                       const ComplexMatrix& y, double t, double dt) {
    const ComplexMatrix k1 = rhs(y, t);
    const ComplexMatrix k2 = rhs(y + 0.5 * dt * k1, t + 0.5 * dt);
    const ComplexMatrix k3 = rhs(y + 0.5 * dt * k2, t + 0.5 * dt);
    const ComplexMatrix k4 = rhs(y + dt * k3, t + dt);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

StepRecord record_observables(const LindbladModel& model, const DensityMatrix& rho,
                              const InvariantSet& invariants, double t,
                              const std::vector<double>& renyi_alphas) {
    const std::vector<double>& alphas = renyi_alphas;
    StepRecord rec;
    rec.t = t;
    rec.expectations.reserve(invariants.size());
    rec.variances.reserve(invariants.size());
    for (const auto& inv : invariants.members) {
        rec.expectations.push_back(expectation(rho, inv));
        rec.variances.push_back(variance(rho, inv));
    }
    const CovarianceMatrix cov = covariance_matrix(rho, invariants);
    rec.covariance = cov.values;
    rec.covariance_rate = covariance_rate(model, rho, invariants, t);
    rec.entropy = von_neumann(rho, tol::dynamical);
    rec.entropy_bound = entropy_rate_bound(model, rho, t);
    rec.renyi_entropies.reserve(alphas.size());
    rec.renyi_bounds.reserve(alphas.size());
    for (const double a : alphas) {
        rec.renyi_entropies.push_back(renyi(rho, a, tol::dynamical));
        rec.renyi_bounds.push_back(renyi_rate_bound(model, rho, a, t, tol::dynamical));
    }
    return rec;
}

Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0,
                     const InvariantSet& invariants0, const TimeGrid& grid,
                     const IntegrateOptions& options) {
    detail::require_same_dim(model.dim(), rho0.dim(), "integrate");
    detail::require_same_dim(model.dim(), invariants0.dim, "integrate");
    for (const double a : options.renyi_alphas) {
        if (a <= 0.0 || a > 2.0) {
            std::ostringstream msg;
            msg << "integrate: recorded Renyi alpha " << a << " outside (0, 2]";
            throw ConfigError(msg.str());
        }
    }

    Trajectory traj{grid, options.renyi_alphas, {}, {}, {}, 0.0, 0, {}};
    traj.states.reserve(grid.steps + 1);
    traj.invariant_series.assign(invariants0.size(), {});
    for (auto& series : traj.invariant_series) series.reserve(grid.steps + 1);
    traj.records.reserve(grid.steps + 1);

    const auto rho_f = [&model](const ComplexMatrix& y, double t) {
        return rho_rhs_raw(model, y, t);
    };
    const auto inv_f = [&model](const ComplexMatrix& y, double t) {
        return invariant_rhs_raw(model, y, t);
    };

    ComplexMatrix rho = rho0.matrix();
    std::vector<ComplexMatrix> invs;
    invs.reserve(invariants0.size());
    for (const auto& inv : invariants0.members) invs.push_back(inv.matrix());

    std::vector<double> initial_expectations;

    const double dt = grid.dt();
    for (int step = 0; step <= grid.steps; ++step) {
        const double t = grid.time(step);

        rho = 0.5 * (rho + rho.adjoint().eval());

        // Positivity handling precedes state validation so the policy, not
        // the type invariant, decides what a violation means.
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("integrate: eigenvalue computation failed");
        }
        const double min_ev = solver.eigenvalues().minCoeff();
        if (min_ev < -options.psd_tol) {
            if (options.psd_policy == PsdPolicy::fail) {
                std::ostringstream msg;
                msg << "integrate: state eigenvalue " << min_ev << " below -" << options.psd_tol
                    << " at step " << step << " (t = " << t << ")";
                throw IntegrationError(msg.str());
            }
            RealVector clipped = solver.eigenvalues().cwiseMax(0.0);
            rho = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
            rho /= rho.trace().real();
            rho = 0.5 * (rho + rho.adjoint().eval());
            ++traj.projection_count;
            traj.projected_steps.push_back(step);
        }
        const DensityMatrix state(HermitianOperator(rho), tol::dynamical, options.psd_tol);

        std::vector<HermitianOperator> current_invs;
        current_invs.reserve(invs.size());
        for (auto& m : invs) {
            m = 0.5 * (m + m.adjoint().eval());
            current_invs.push_back(HermitianOperator(m));
        }
        const InvariantSet current_set(model.dim(), current_invs);

        StepRecord rec = record_observables(model, state, current_set, t, options.renyi_alphas);
        if (step == 0) {
            initial_expectations = rec.expectations;
        } else {
            for (std::size_t k = 0; k < rec.expectations.size(); ++k) {
                traj.max_expectation_drift =
                    std::max(traj.max_expectation_drift,
                             std::abs(rec.expectations[k] - initial_expectations[k]));
            }
        }

        traj.states.push_back(state);
        for (std::size_t k = 0; k < invs.size(); ++k) {
            traj.invariant_series[k].push_back(current_invs[k]);
        }
        traj.records.push_back(std::move(rec));

        if (step < grid.steps) {
            rho = rk4_step(rho_f, rho, t, dt);
            for (auto& m : invs) m = rk4_step(inv_f, m, t, dt);
        }
    }
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const std::size_t members =
        trajectory.records.empty() ? 0 : trajectory.records.front().expectations.size();
    out << "t";
    for (std::size_t k = 0; k < members; ++k) out << ",expectation." << k;
    for (std::size_t k = 0; k < members; ++k) out << ",variance." << k;
    for (std::size_t k = 0; k < members; ++k)
        for (std::size_t kp = k + 1; kp < members; ++kp) out << ",cov." << k << "." << kp;
    out << ",S";
    for (const double a : trajectory.renyi_alphas) out << ",S_alpha." << csv::label(a);
    out << ",bound_vn";
    for (const double a : trajectory.renyi_alphas) out << ",bound_renyi." << csv::label(a);
    out << '\n';

    for (const auto& rec : trajectory.records) {
        out << csv::g17(rec.t);
        for (const double e : rec.expectations) out << ',' << csv::g17(e);
        for (const double v : rec.variances) out << ',' << csv::g17(v);
        for (std::size_t k = 0; k < members; ++k)
            for (std::size_t kp = k + 1; kp < members; ++kp)
                out << ',' << csv::g17(rec.covariance(static_cast<Eigen::Index>(k),
                                                      static_cast<Eigen::Index>(kp)));
        out << ',' << csv::g17(rec.entropy);
        for (const double s : rec.renyi_entropies) out << ',' << csv::g17(s);
        out << ',' << csv::g17(rec.entropy_bound);
        for (const double b : rec.renyi_bounds) out << ',' << csv::g17(b);
        out << '\n';
    }
}

}  // namespace weakinv
