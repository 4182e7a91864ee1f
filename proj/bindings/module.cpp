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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weakinv/channels.hpp"
#include "weakinv/entropy.hpp"
#include "weakinv/gkls.hpp"
#include "weakinv/invariants.hpp"
#include "weakinv/oscillator.hpp"
#include "weakinv/rng.hpp"

namespace py = pybind11;
using namespace weakinv;

namespace {

KrausChannel make_channel(const std::vector<ComplexMatrix>& kraus) {
    if (kraus.empty()) throw InvalidChannelError("empty Kraus family");
    return KrausChannel(kraus.front().rows(), kraus);
}

LindbladModel make_model(const ComplexMatrix& h,
                         const std::vector<std::pair<double, ComplexMatrix>>& dissipators) {
    return LindbladModel::constant(h, dissipators);
}

InvariantSet make_set(Eigen::Index dim, const std::vector<ComplexMatrix>& members) {
    std::vector<HermitianOperator> ops;
    ops.reserve(members.size());
    for (const auto& m : members) ops.push_back(hermitize(m));
    return InvariantSet(dim, std::move(ops));
}

osc::StiffnessSchedule make_schedule(const std::string& name, double k0, double lambda) {
    if (name == "exp") return osc::exponential_schedule(k0, lambda);
    if (name == "rational") return osc::rational_schedule(k0, lambda);
    throw ConfigError("unknown schedule '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Open-system dynamics: Kraus channels, entropies, weak-invariant "
              "fluctuations, Lindblad-type integration and the su(1,1) oscillator";

    // Translators run newest-first, so the base class is registered first
    // and the specific mappings take precedence.
    py::register_exception<Error>(m, "WeakinvError", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigurationError", PyExc_ValueError);

    m.def("hermitize", [](const ComplexMatrix& a) { return hermitize(a).matrix(); },
          py::arg("matrix"), "Symmetrized (M + M^dagger)/2.");
    m.def(
        "expectation",
        [](const ComplexMatrix& rho, const ComplexMatrix& q) {
            return expectation(DensityMatrix(hermitize(rho)), hermitize(q));
        },
        py::arg("rho"), py::arg("observable"));
    m.def(
        "validate_density",
        [](const ComplexMatrix& rho) {
            const auto d = validate_density(rho);
            py::dict out;
            out["hermiticity_defect"] = d.hermiticity_defect;
            out["trace_defect"] = d.trace_defect;
            out["min_eigenvalue"] = d.min_eigenvalue;
            out["pass"] = d.pass();
            return out;
        },
        py::arg("rho"));

    m.def(
        "von_neumann",
        [](const ComplexMatrix& rho) { return von_neumann(DensityMatrix(hermitize(rho))); },
        py::arg("rho"), "Von Neumann entropy in nats.");
    m.def(
        "renyi",
        [](const ComplexMatrix& rho, double alpha) {
            return renyi(DensityMatrix(hermitize(rho)), alpha);
        },
        py::arg("rho"), py::arg("alpha"));
    m.def(
        "linear_entropy",
        [](const ComplexMatrix& rho) { return linear_entropy(DensityMatrix(hermitize(rho))); },
        py::arg("rho"));
    m.def(
        "alpha_expectation",
        [](const ComplexMatrix& rho, const ComplexMatrix& q, double alpha) {
            return alpha_expectation(DensityMatrix(hermitize(rho)), hermitize(q), alpha);
        },
        py::arg("rho"), py::arg("observable"), py::arg("alpha"));

    m.def(
        "apply_channel",
        [](const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho) {
            return apply(make_channel(kraus), DensityMatrix(hermitize(rho))).matrix();
        },
        py::arg("kraus"), py::arg("rho"), "Forward action sum_n V_n rho V_n^dagger.");
    m.def(
        "adjoint_apply",
        [](const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& q) {
            return adjoint_apply(make_channel(kraus), hermitize(q)).matrix();
        },
        py::arg("kraus"), py::arg("observable"),
        "Adjoint action sum_n V_n^dagger Q V_n (backward evolution of weak invariants).");
    m.def(
        "is_trace_preserving",
        [](const std::vector<ComplexMatrix>& kraus, double tolerance) {
            const auto c = is_trace_preserving(make_channel(kraus), tolerance);
            return py::make_tuple(c.ok, c.defect);
        },
        py::arg("kraus"), py::arg("tolerance") = tol::structural);
    m.def(
        "is_unital",
        [](const std::vector<ComplexMatrix>& kraus, double tolerance) {
            const auto c = is_unital(make_channel(kraus), tolerance);
            return py::make_tuple(c.ok, c.defect);
        },
        py::arg("kraus"), py::arg("tolerance") = tol::structural);
    m.def(
        "random_channel",
        [](Eigen::Index sys_dim, Eigen::Index env_dim, std::uint64_t seed) {
            return random_channel(sys_dim, env_dim, seed).operators();
        },
        py::arg("sys_dim"), py::arg("env_dim"), py::arg("seed"),
        "Haar-dilation channel; deterministic for a given seed.");
    m.def("amplitude_damping_channel",
          [](double gamma) { return amplitude_damping_channel(gamma).operators(); },
          py::arg("gamma"));
    m.def(
        "povm_probabilities",
        [](Eigen::Index sys_dim, Eigen::Index env_dim, const ComplexMatrix& u,
           const ComplexVector& phi, const ComplexMatrix& rho) {
            return povm_probabilities(DilationSpec(sys_dim, env_dim, u, phi),
                                      DensityMatrix(hermitize(rho)));
        },
        py::arg("sys_dim"), py::arg("env_dim"), py::arg("unitary"), py::arg("env_state"),
        py::arg("rho"));
    m.def(
        "naimark_check",
        [](Eigen::Index sys_dim, Eigen::Index env_dim, const ComplexMatrix& u,
           const ComplexVector& phi, const ComplexVector& psi) {
            return naimark_check(DilationSpec(sys_dim, env_dim, u, phi), psi);
        },
        py::arg("sys_dim"), py::arg("env_dim"), py::arg("unitary"), py::arg("env_state"),
        py::arg("psi"));

    m.def(
        "pull_back",
        [](const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& i_final) {
            return pull_back(make_channel(kraus), hermitize(i_final)).matrix();
        },
        py::arg("kraus"), py::arg("invariant_final"));
    m.def(
        "variance",
        [](const ComplexMatrix& rho, const ComplexMatrix& i) {
            return variance(DensityMatrix(hermitize(rho)), hermitize(i));
        },
        py::arg("rho"), py::arg("invariant"));
    m.def(
        "covariance",
        [](const ComplexMatrix& rho, const ComplexMatrix& a, const ComplexMatrix& b) {
            return covariance(DensityMatrix(hermitize(rho)), hermitize(a), hermitize(b));
        },
        py::arg("rho"), py::arg("a"), py::arg("b"));
    m.def(
        "covariance_matrix",
        [](const ComplexMatrix& rho, const std::vector<ComplexMatrix>& members) {
            return covariance_matrix(DensityMatrix(hermitize(rho)),
                                     make_set(rho.rows(), members))
                .values;
        },
        py::arg("rho"), py::arg("invariants"));

    m.def(
        "rho_rhs",
        [](const ComplexMatrix& h, const std::vector<std::pair<double, ComplexMatrix>>& diss,
           const ComplexMatrix& rho) {
            return rho_rhs(make_model(h, diss), DensityMatrix(hermitize(rho)), 0.0).matrix();
        },
        py::arg("hamiltonian"), py::arg("dissipators"), py::arg("rho"));
    m.def(
        "invariant_rhs",
        [](const ComplexMatrix& h, const std::vector<std::pair<double, ComplexMatrix>>& diss,
           const ComplexMatrix& i) {
            return invariant_rhs(make_model(h, diss), hermitize(i), 0.0).matrix();
        },
        py::arg("hamiltonian"), py::arg("dissipators"), py::arg("invariant"));
    m.def(
        "kraus_step",
        [](const ComplexMatrix& h, const std::vector<std::pair<double, ComplexMatrix>>& diss,
           double dt) { return kraus_step(make_model(h, diss), 0.0, dt).operators(); },
        py::arg("hamiltonian"), py::arg("dissipators"), py::arg("dt"));
    m.def(
        "entropy_rate_bound",
        [](const ComplexMatrix& h, const std::vector<std::pair<double, ComplexMatrix>>& diss,
           const ComplexMatrix& rho) {
            return entropy_rate_bound(make_model(h, diss), DensityMatrix(hermitize(rho)), 0.0);
        },
        py::arg("hamiltonian"), py::arg("dissipators"), py::arg("rho"));
    m.def(
        "renyi_rate_bound",
        [](const ComplexMatrix& h, const std::vector<std::pair<double, ComplexMatrix>>& diss,
           const ComplexMatrix& rho, double alpha) {
            return renyi_rate_bound(make_model(h, diss), DensityMatrix(hermitize(rho)), alpha,
                                    0.0);
        },
        py::arg("hamiltonian"), py::arg("dissipators"), py::arg("rho"), py::arg("alpha"));
    m.def(
        "variance_rate",
        [](const ComplexMatrix& h, const std::vector<std::pair<double, ComplexMatrix>>& diss,
           const ComplexMatrix& rho, const ComplexMatrix& i) {
            return variance_rate(make_model(h, diss), DensityMatrix(hermitize(rho)),
                                 hermitize(i), 0.0);
        },
        py::arg("hamiltonian"), py::arg("dissipators"), py::arg("rho"), py::arg("invariant"));
    m.def(
        "covariance_rate",
        [](const ComplexMatrix& h, const std::vector<std::pair<double, ComplexMatrix>>& diss,
           const ComplexMatrix& rho, const std::vector<ComplexMatrix>& members) {
            return covariance_rate(make_model(h, diss), DensityMatrix(hermitize(rho)),
                                   make_set(rho.rows(), members), 0.0);
        },
        py::arg("hamiltonian"), py::arg("dissipators"), py::arg("rho"), py::arg("invariants"));

    m.def(
        "integrate",
        [](const ComplexMatrix& h, const std::vector<std::pair<double, ComplexMatrix>>& diss,
           const ComplexMatrix& rho0, const std::vector<ComplexMatrix>& invariants, double t0,
           double t1, int steps, const std::vector<double>& alphas, bool project) {
            IntegrateOptions options;
            if (!alphas.empty()) options.renyi_alphas = alphas;
            options.psd_policy = project ? PsdPolicy::project : PsdPolicy::fail;
            const Trajectory traj =
                integrate(make_model(h, diss), DensityMatrix(hermitize(rho0)),
                          make_set(rho0.rows(), invariants), TimeGrid(t0, t1, steps), options);
            const auto n_steps = static_cast<Eigen::Index>(traj.records.size());
            const auto n_members = static_cast<Eigen::Index>(invariants.size());
            const auto n_alphas = static_cast<Eigen::Index>(options.renyi_alphas.size());
            RealVector times(n_steps), entropy(n_steps), bound(n_steps);
            RealMatrix expectations(n_steps, n_members), variances(n_steps, n_members);
            RealMatrix renyis(n_steps, n_alphas), renyi_bounds(n_steps, n_alphas);
            for (Eigen::Index s = 0; s < n_steps; ++s) {
                const auto& rec = traj.records[static_cast<std::size_t>(s)];
                times[s] = rec.t;
                entropy[s] = rec.entropy;
                bound[s] = rec.entropy_bound;
                for (Eigen::Index k = 0; k < n_members; ++k) {
                    expectations(s, k) = rec.expectations[static_cast<std::size_t>(k)];
                    variances(s, k) = rec.variances[static_cast<std::size_t>(k)];
                }
                for (Eigen::Index a = 0; a < n_alphas; ++a) {
                    renyis(s, a) = rec.renyi_entropies[static_cast<std::size_t>(a)];
                    renyi_bounds(s, a) = rec.renyi_bounds[static_cast<std::size_t>(a)];
                }
            }
            py::dict out;
            out["times"] = times;
            out["expectations"] = expectations;
            out["variances"] = variances;
            out["entropy"] = entropy;
            out["entropy_bound"] = bound;
            out["renyi"] = renyis;
            out["renyi_bounds"] = renyi_bounds;
            out["renyi_alphas"] = options.renyi_alphas;
            out["max_expectation_drift"] = traj.max_expectation_drift;
            out["final_state"] = traj.states.back().matrix();
            out["projections"] = traj.projection_count;
            return out;
        },
        py::arg("hamiltonian"), py::arg("dissipators"), py::arg("rho0"), py::arg("invariants"),
        py::arg("t0") = 0.0, py::arg("t1") = 1.0, py::arg("steps") = 1000,
        py::arg("alphas") = std::vector<double>{}, py::arg("project") = false,
        "Co-integrate the state and invariant equations, returning per-step observables.");

    m.def(
        "su11_basis",
        [](Eigen::Index fock_dim, int margin) {
            const auto basis = osc::build_su11(fock_dim, margin);
            return py::make_tuple(basis.k1.matrix(), basis.k2.matrix(), basis.k3.matrix());
        },
        py::arg("fock_dim"), py::arg("margin") = 4,
        "Truncated (K1, K2, K3) = (p^2/2, x^2/2, (px+xp)/2).");
    m.def(
        "propagate_coefficients",
        [](const std::vector<double>& alpha0, double t0, double t1, int steps,
           const std::string& schedule, double k0, double lambda) {
            if (alpha0.size() != 3) throw DomainError("alpha0 needs three entries");
            const auto path = osc::propagate_coefficients(
                {alpha0[0], alpha0[1], alpha0[2]}, TimeGrid(t0, t1, steps),
                make_schedule(schedule, k0, lambda));
            RealMatrix out(static_cast<Eigen::Index>(path.size()), 3);
            for (Eigen::Index s = 0; s < out.rows(); ++s) {
                const auto& a = path[static_cast<std::size_t>(s)];
                out(s, 0) = a.alpha1;
                out(s, 1) = a.alpha2;
                out(s, 2) = a.alpha3;
            }
            return out;
        },
        py::arg("alpha0"), py::arg("t0"), py::arg("t1"), py::arg("steps"),
        py::arg("schedule") = "exp", py::arg("k0") = 1.0, py::arg("lambda") = 1.0);

    m.attr("__version__") = "0.1.0";
}
