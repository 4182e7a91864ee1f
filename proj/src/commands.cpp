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

#include "weakinv/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "weakinv/channels.hpp"
#include "weakinv/csv.hpp"
#include "weakinv/entropy.hpp"
#include "weakinv/gkls.hpp"
#include "weakinv/invariants.hpp"
#include "weakinv/oscillator.hpp"
#include "weakinv/rng.hpp"

namespace weakinv {

namespace {

using nlohmann::json;

std::string timestamp_line() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buffer[64];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return std::string("# generated ") + buffer + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output path '" + path + "' for writing");
    out << content;
    if (!out) throw ConfigError("failed while writing '" + path + "'");
}

struct OutputSpec {
    std::string csv_path;
    bool timestamp = true;
};

OutputSpec output_spec(ConfigMap& cfg, const std::string& default_name) {
    OutputSpec spec;
    spec.csv_path = cfg.get_string("out", default_name);
    spec.timestamp = cfg.get_bool("timestamp", true);
    return spec;
}

void emit(const OutputSpec& spec, const std::string& csv_body, const json& summary) {
    std::string csv = spec.timestamp ? timestamp_line() + csv_body : csv_body;
    write_file(spec.csv_path, csv);
    write_file(summary_path(spec.csv_path), summary.dump(2) + "\n");
}

/// Fixed-size worker pool over [0, n); case results are stored by index so
/// report order never depends on scheduling.
void parallel_for(int n, const std::function<void(int)>& body) {
    if (n <= 0) return;
    unsigned workers = std::thread::hardware_concurrency();
    workers = std::min<unsigned>(std::max(workers, 1u), 8u);
    if (n < 4 || workers < 2) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

ComplexMatrix lowering_qubit() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    return m;
}

struct GklsSetup {
    LindbladModel model;
    DensityMatrix rho0;
    InvariantSet invariants;
};

/// Shared model/state/invariant assembly for gkls-run and kraus-step-study.
GklsSetup build_gkls_setup(ConfigMap& cfg, Rng& rng) {
    const std::string model_kind = cfg.get_string("model", "custom");

    std::optional<LindbladModel> model;
    Eigen::Index dim = 0;
    if (model_kind == "dephasing") {
        const double c = cfg.get_double("rate", 0.25);
        model = LindbladModel::constant(ComplexMatrix::Zero(2, 2), {{c, sigma_z()}});
        dim = 2;
    } else if (model_kind == "amplitude-damping") {
        const double c = cfg.get_double("rate", 0.25);
        model = LindbladModel::constant(ComplexMatrix::Zero(2, 2), {{c, lowering_qubit()}});
        dim = 2;
    } else if (model_kind == "random") {
        dim = cfg.get_int("dim", 4);
        if (dim < 2) throw ConfigError("config key 'dim': need dim >= 2");
        const int n_diss = cfg.get_int("dissipators", 2);
        if (n_diss < 0) throw ConfigError("config key 'dissipators': must be nonnegative");
        const ComplexMatrix h = random_hermitian(dim, rng).matrix();
        std::vector<std::pair<double, ComplexMatrix>> terms;
        for (int i = 0; i < n_diss; ++i) {
            ComplexMatrix l(dim, dim);
            for (Eigen::Index r = 0; r < dim; ++r)
                for (Eigen::Index c = 0; c < dim; ++c) l(r, c) = rng.complex_normal();
            l /= l.norm();
            terms.emplace_back(0.1 + 0.4 * rng.uniform(), std::move(l));
        }
        model = LindbladModel::constant(h, std::move(terms));
    } else if (model_kind == "custom") {
        const auto h = cfg.find_matrix("hamiltonian");
        if (!h) throw ConfigError("custom model needs a 'hamiltonian' matrix");
        detail::require_square(*h, "hamiltonian");
        dim = h->rows();
        const int cfg_dim = cfg.get_int("dim", static_cast<int>(dim));
        if (cfg_dim != dim) throw ConfigError("config key 'dim' disagrees with 'hamiltonian'");
        std::vector<std::pair<double, ComplexMatrix>> terms;
        for (const int idx : cfg.indexed_entries("dissipator")) {
            std::ostringstream rate_key, op_key;
            rate_key << "dissipator." << idx << ".rate";
            op_key << "dissipator." << idx << ".op";
            const double rate = cfg.get_double(rate_key.str(),
                                               std::numeric_limits<double>::quiet_NaN());
            if (!std::isfinite(rate)) {
                throw ConfigError("config key '" + rate_key.str() + "' is required");
            }
            if (rate < 0.0) {
                throw ConfigError("config key '" + rate_key.str() + "': rate must be nonnegative");
            }
            const auto op = cfg.find_matrix(op_key.str());
            if (!op) throw ConfigError("config key '" + op_key.str() + "' is required");
            terms.emplace_back(rate, *op);
        }
        model = LindbladModel::constant(0.5 * (*h + h->adjoint().eval()), std::move(terms));
    } else {
        throw ConfigError("config key 'model': unknown model '" + model_kind + "'");
    }

    const std::string rho_kind = cfg.get_string("rho0", "maxmixed");
    std::optional<DensityMatrix> rho0;
    if (rho_kind == "plus") {
        if (dim != 2) throw ConfigError("rho0 = plus needs a qubit model");
        ComplexMatrix m(2, 2);
        m << 0.5, 0.5, 0.5, 0.5;
        rho0 = DensityMatrix(hermitize(m));
    } else if (rho_kind == "maxmixed") {
        rho0 = DensityMatrix(
            hermitize(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)));
    } else if (rho_kind == "random") {
        rho0 = random_density(dim, rng);
    } else {
        rho0 = DensityMatrix(hermitize(parse_matrix_literal(rho_kind)));
    }

    std::vector<HermitianOperator> members;
    for (const int idx : cfg.indexed_entries("invariant")) {
        std::ostringstream key;
        key << "invariant." << idx;
        const std::string text = cfg.require_string(key.str());
        if (text == "sigma_x") {
            members.push_back(hermitize(sigma_x()));
        } else if (text == "sigma_y") {
            members.push_back(hermitize(sigma_y()));
        } else if (text == "sigma_z") {
            members.push_back(hermitize(sigma_z()));
        } else if (text == "hamiltonian") {
            members.push_back(hermitize(model->hamiltonian(0.0)));
        } else if (text == "random") {
            members.push_back(random_hermitian(dim, rng));
        } else {
            members.push_back(hermitize(parse_matrix_literal(text)));
        }
    }
    if (members.empty()) {
        members.push_back(random_hermitian(dim, rng));
        members.push_back(random_hermitian(dim, rng));
    }
    for (const auto& m : members) {
        detail::require_same_dim(m.dim(), dim, "invariant");
    }

    return {std::move(*model), std::move(*rho0), InvariantSet(dim, std::move(members))};
}

TimeGrid read_grid(ConfigMap& cfg, double default_t1 = 1.0, int default_steps = 1000) {
    return TimeGrid(cfg.get_double("grid.t0", 0.0), cfg.get_double("grid.t1", default_t1),
                    cfg.get_int("grid.steps", default_steps));
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::string summary_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".summary.json");
    return p.string();
}

int run_channel_audit(ConfigMap cfg) {
    const OutputSpec out = output_spec(cfg, "channel_audit.csv");
    const auto base_seed = cfg.get_seed("seed", 1234);
    const int cases = cfg.get_int("cases", 200);
    const int min_dim = cfg.get_int("min_dim", 2);
    const int max_dim = cfg.get_int("max_dim", 4);
    const int min_env = cfg.get_int("min_env", 2);
    const int max_env = cfg.get_int("max_env", 4);
    const int max_chain = cfg.get_int("max_chain", 5);
    const double slack = cfg.get_double("slack", tol::structural);
    const bool inject_invalid = cfg.get_bool("inject_invalid", false);
    cfg.require_all_consumed();
    if (cases < 0) throw ConfigError("config key 'cases': must be nonnegative");
    if (min_dim < 1 || max_dim < min_dim) throw ConfigError("bad dim range");
    if (min_env < 1 || max_env < min_env) throw ConfigError("bad env range");
    if (max_chain < 1) throw ConfigError("config key 'max_chain': must be at least 1");

    struct Row {
        std::uint64_t seed;
        int dim = 0;
        int chain = 0;
        double drift = 0.0;
        double increment = 0.0;
        bool pass = false;
        std::string note;
    };
    const int total = cases + (inject_invalid ? 1 : 0);
    std::vector<Row> rows(static_cast<std::size_t>(total));

    parallel_for(total, [&](int i) {
        Row& row = rows[static_cast<std::size_t>(i)];
        row.seed = base_seed + static_cast<std::uint64_t>(i);
        Rng rng(row.seed);
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(min_dim, max_dim));
        const int chain = static_cast<int>(rng.uniform_int(1, max_chain));
        row.dim = static_cast<int>(dim);
        row.chain = chain;
        try {
            std::vector<KrausChannel> channels;
            channels.reserve(static_cast<std::size_t>(chain));
            for (int k = 0; k < chain; ++k) {
                const auto env = static_cast<Eigen::Index>(rng.uniform_int(min_env, max_env));
                channels.push_back(random_channel(dim, env, rng.next_u64()));
            }
            if (inject_invalid && i == cases) {
                // Deliberately broken fixture: a uniformly scaled identity
                // is not trace-preserving.
                channels.push_back(
                    KrausChannel(dim, {0.5 * ComplexMatrix::Identity(dim, dim)}));
            }
            const DensityMatrix rho0 = random_density(dim, rng);
            const HermitianOperator i_final = random_hermitian(dim, rng);
            const auto report =
                audit_variance_growth(channels, rho0, i_final, tol::structural, slack);
            row.drift = report.max_expectation_drift;
            row.increment = report.min_variance_increment;
            row.pass = report.passed();
            if (!row.pass) row.note = "monotonicity-or-conservation violation";
        } catch (const InvalidChannelError& e) {
            row.pass = false;
            row.note = std::string("invalid-channel: ") + e.what();
        }
    });

    std::ostringstream body;
    body << "seed,dim,steps,max_expectation_drift,min_variance_increment,pass,note\n";
    int violations = 0;
    double worst_drift = 0.0;
    double worst_increment = total > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    for (const auto& row : rows) {
        if (!row.pass) ++violations;
        worst_drift = std::max(worst_drift, row.drift);
        worst_increment = std::min(worst_increment, row.increment);
        body << row.seed << ',' << row.dim << ',' << row.chain << ',' << csv::g17(row.drift)
             << ',' << csv::g17(row.increment) << ',' << (row.pass ? "pass" : "fail") << ','
             << row.note << '\n';
    }
    if (total == 0) {
        std::cerr << "channel-audit: empty seed range, nothing audited\n";
        worst_increment = 0.0;
    }

    json summary;
    summary["kind"] = "channel-audit";
    summary["cases"] = total;
    summary["violations"] = violations;
    summary["max_expectation_drift"] = worst_drift;
    summary["min_variance_increment"] = worst_increment;
    summary["slack"] = slack;
    summary["pass"] = violations == 0;
    emit(out, body.str(), summary);
    return violations == 0 ? kExitPass : kExitViolation;
}

int run_unital_entropy_audit(ConfigMap cfg) {
    const OutputSpec out = output_spec(cfg, "entropy_audit.csv");
    const auto base_seed = cfg.get_seed("seed", 1234);
    const int unital_cases = cfg.get_int("channels", 100);
    const int min_dim = cfg.get_int("min_dim", 2);
    const int max_dim = cfg.get_int("max_dim", 4);
    const int unitary_count = cfg.get_int("unitaries", 4);
    const std::vector<double> alphas = cfg.get_double_list("alphas", {0.5, 1.5, 2.0});
    const int nonunital_cases = cfg.get_int("nonunital_cases", 50);
    const double slack = cfg.get_double("slack", tol::structural);
    cfg.require_all_consumed();
    for (const double a : alphas) {
        if (a <= 0.0 || a > 2.0) {
            std::ostringstream msg;
            msg << "config key 'alphas': unital monotonicity is only asserted for alpha in "
                   "(0, 2], got "
                << a;
            throw ConfigError(msg.str());
        }
    }
    if (unital_cases < 0 || nonunital_cases < 0) {
        throw ConfigError("case counts must be nonnegative");
    }

    struct Case {
        std::uint64_t seed;
        int dim;
        bool unital;
        std::vector<double> before;  // index 0: von Neumann, then alphas
        std::vector<double> after;
        bool violation = false;
    };
    const int total = unital_cases + nonunital_cases;
    std::vector<Case> cases(static_cast<std::size_t>(total));

    parallel_for(total, [&](int i) {
        Case& c = cases[static_cast<std::size_t>(i)];
        c.seed = base_seed + static_cast<std::uint64_t>(i);
        c.unital = i < unital_cases;
        Rng rng(c.seed);
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(min_dim, max_dim));
        c.dim = static_cast<int>(dim);
        const KrausChannel phi =
            c.unital ? random_mixed_unitary_channel(dim, unitary_count, rng.next_u64())
                     : random_channel(dim, static_cast<Eigen::Index>(rng.uniform_int(2, 4)),
                                      rng.next_u64());
        const DensityMatrix rho = random_density(dim, rng);
        const DensityMatrix evolved = apply(phi, rho);
        c.before.push_back(von_neumann(rho));
        c.after.push_back(von_neumann(evolved));
        for (const double a : alphas) {
            c.before.push_back(renyi(rho, a));
            c.after.push_back(renyi(evolved, a));
        }
        if (c.unital) {
            for (std::size_t k = 0; k < c.before.size(); ++k) {
                if (c.after[k] < c.before[k] - slack) c.violation = true;
            }
        }
    });

    // The non-unital contrast fixture: damping on the maximally mixed qubit
    // lowers the entropy while the pulled-back observable's variance grows.
    const KrausChannel damping = amplitude_damping_channel(0.5);
    const DensityMatrix mixed(hermitize(0.5 * ComplexMatrix::Identity(2, 2)));
    const DensityMatrix damped = apply(damping, mixed);
    const HermitianOperator pulled = pull_back(damping, hermitize(sigma_z()));
    const double fixture_s_before = von_neumann(mixed);
    const double fixture_s_after = von_neumann(damped);
    const double fixture_var_before = variance(mixed, pulled);
    const double fixture_var_after = variance(damped, hermitize(sigma_z()));

    std::ostringstream body;
    body << "case,kind,seed,dim,functional,before,after,delta,violation\n";
    int violations = 0;
    int nonunital_decreases = 0;
    auto label = [&](std::size_t k) {
        return k == 0 ? std::string("S") : "S_alpha." + csv::label(alphas[k - 1]);
    };
    for (int i = 0; i < total; ++i) {
        const Case& c = cases[static_cast<std::size_t>(i)];
        if (c.unital && c.violation) ++violations;
        for (std::size_t k = 0; k < c.before.size(); ++k) {
            const double delta = c.after[k] - c.before[k];
            const bool row_violation = c.unital && delta < -slack;
            if (!c.unital && delta < -slack) ++nonunital_decreases;
            body << i << ',' << (c.unital ? "unital" : "nonunital") << ',' << c.seed << ','
                 << c.dim << ',' << label(k) << ',' << csv::g17(c.before[k]) << ','
                 << csv::g17(c.after[k]) << ',' << csv::g17(delta) << ','
                 << (row_violation ? "yes" : "no") << '\n';
        }
    }
    body << total << ",contrast,0,2,S," << csv::g17(fixture_s_before) << ','
         << csv::g17(fixture_s_after) << ',' << csv::g17(fixture_s_after - fixture_s_before)
         << ",no\n";
    body << total << ",contrast,0,2,variance," << csv::g17(fixture_var_before) << ','
         << csv::g17(fixture_var_after) << ','
         << csv::g17(fixture_var_after - fixture_var_before) << ",no\n";

    json summary;
    summary["kind"] = "unital-entropy-audit";
    summary["unital_cases"] = unital_cases;
    summary["nonunital_cases"] = nonunital_cases;
    summary["violations"] = violations;
    summary["nonunital_decreases_found"] = nonunital_decreases;
    summary["contrast_fixture"] = {{"entropy_before", fixture_s_before},
                                   {"entropy_after", fixture_s_after},
                                   {"variance_before", fixture_var_before},
                                   {"variance_after", fixture_var_after}};
    summary["slack"] = slack;
    summary["pass"] = violations == 0;
    emit(out, body.str(), summary);
    return violations == 0 ? kExitPass : kExitViolation;
}

int run_gkls(ConfigMap cfg) {
    const OutputSpec out = output_spec(cfg, "gkls_run.csv");
    const auto seed = cfg.get_seed("seed", 1234);
    Rng rng(seed);
    GklsSetup setup = build_gkls_setup(cfg, rng);
    const TimeGrid grid = read_grid(cfg);
    IntegrateOptions options;
    options.renyi_alphas = cfg.get_double_list("alphas", {0.5, 1.5, 2.0});
    const std::string psd = cfg.get_string("psd", "fail");
    if (psd == "project") {
        options.psd_policy = PsdPolicy::project;
    } else if (psd != "fail") {
        throw ConfigError("config key 'psd': expected 'fail' or 'project'");
    }
    const double conservation_tol = cfg.get_double("conservation_tol", 1e-6);
    const double variance_slack = cfg.get_double("variance_slack", tol::dynamical);
    const double fd_rel_tol = cfg.get_double("fd_rel_tol", 1e-4);
    const double bound_slack = cfg.get_double("bound_slack", 1e-6);
    cfg.require_all_consumed();

    const Trajectory traj = integrate(setup.model, setup.rho0, setup.invariants, grid, options);

    // Post-run checks from the recorded observables.
    const std::size_t members = setup.invariants.size();
    double min_variance_increment = std::numeric_limits<double>::infinity();
    for (std::size_t s = 1; s < traj.records.size(); ++s) {
        for (std::size_t k = 0; k < members; ++k) {
            min_variance_increment =
                std::min(min_variance_increment,
                         traj.records[s].variances[k] - traj.records[s - 1].variances[k]);
        }
    }
    if (traj.records.size() < 2) min_variance_increment = 0.0;

    const double dt = grid.dt();
    double fd_cov_rel = 0.0;
    double bound_violation = 0.0;
    double min_rate_diag = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < traj.records.size(); ++s) {
        for (std::size_t k = 0; k < members; ++k) {
            min_rate_diag = std::min(
                min_rate_diag, traj.records[s].covariance_rate(static_cast<Eigen::Index>(k),
                                                               static_cast<Eigen::Index>(k)));
        }
    }
    if (traj.records.empty()) min_rate_diag = 0.0;
    for (std::size_t s = 1; s + 1 < traj.records.size(); ++s) {
        const RealMatrix fd =
            (traj.records[s + 1].covariance - traj.records[s - 1].covariance) / (2.0 * dt);
        const RealMatrix& rate = traj.records[s].covariance_rate;
        const double denom = std::max(rate.cwiseAbs().maxCoeff(), 1e-6);
        fd_cov_rel = std::max(fd_cov_rel, (fd - rate).cwiseAbs().maxCoeff() / denom);

        const double fd_s =
            (traj.records[s + 1].entropy - traj.records[s - 1].entropy) / (2.0 * dt);
        bound_violation = std::max(bound_violation, traj.records[s].entropy_bound - fd_s);
        for (std::size_t a = 0; a < options.renyi_alphas.size(); ++a) {
            const double fd_a = (traj.records[s + 1].renyi_entropies[a] -
                                 traj.records[s - 1].renyi_entropies[a]) /
                                (2.0 * dt);
            bound_violation =
                std::max(bound_violation, traj.records[s].renyi_bounds[a] - fd_a);
        }
    }

    const bool conservation_ok = traj.max_expectation_drift <= conservation_tol;
    const bool variance_ok = min_variance_increment >= -variance_slack;
    const bool fd_ok = fd_cov_rel <= fd_rel_tol;
    const bool bound_ok = bound_violation <= bound_slack;
    const bool rate_diag_ok = min_rate_diag >= -1e-12;
    const bool pass = conservation_ok && variance_ok && fd_ok && bound_ok && rate_diag_ok;

    std::ostringstream body;
    write_trajectory_csv(body, traj);

    json summary;
    summary["kind"] = "gkls-run";
    summary["seed"] = seed;
    summary["conservation_drift"] = traj.max_expectation_drift;
    summary["min_variance_increment"] = min_variance_increment;
    summary["fd_covariance_max_rel_error"] = fd_cov_rel;
    summary["max_bound_violation"] = bound_violation;
    summary["min_covariance_rate_diagonal"] = min_rate_diag;
    std::vector<double> initial_rates;
    if (!traj.records.empty()) {
        for (std::size_t k = 0; k < members; ++k) {
            initial_rates.push_back(traj.records.front().covariance_rate(
                static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
        }
    }
    summary["initial_variance_rates"] = initial_rates;
    summary["projections"] = traj.projection_count;
    summary["checks"] = {{"conservation", conservation_ok},
                         {"variance_monotone", variance_ok},
                         {"fd_covariance", fd_ok},
                         {"entropy_bounds", bound_ok},
                         {"rate_diagonal", rate_diag_ok}};
    summary["pass"] = pass;
    emit(out, body.str(), summary);
    return pass ? kExitPass : kExitViolation;
}

int run_oscillator(ConfigMap cfg) {
    const OutputSpec out = output_spec(cfg, "oscillator_run.csv");
    const auto n = static_cast<Eigen::Index>(cfg.get_int("n", 30));
    const int margin = cfg.get_int("margin", 4);
    const std::string schedule_name = cfg.get_string("schedule", "exp");
    const double k0 = cfg.get_double("k0", 1.0);
    const double lambda = cfg.get_double("lambda", 1.0);
    const std::vector<double> alpha_list = cfg.get_double_list("alpha0", {0.3, 0.4, 0.25});
    const TimeGrid grid = read_grid(cfg);
    const std::string state_kind = cfg.get_string("state", "coherent");
    const double interior_tol = cfg.get_double("interior_tol", 1e-6);
    const double conservation_tol = cfg.get_double("conservation_tol", 1e-6);
    const double variance_slack = cfg.get_double("variance_slack", tol::dynamical);
    const double fixed_solution_tol = cfg.get_double("fixed_solution_tol", 1e-8);
    const double coeff_check_tol = cfg.get_double("coeff_check_tol", 1e-6);
    if (alpha_list.size() != 3) {
        throw ConfigError("config key 'alpha0': expected three coefficients");
    }

    const osc::SU11Basis basis = osc::build_su11(n, margin);
    osc::StiffnessSchedule schedule;
    if (schedule_name == "exp") {
        schedule = osc::exponential_schedule(k0, lambda);
    } else if (schedule_name == "rational") {
        schedule = osc::rational_schedule(k0, lambda);
    } else {
        throw ConfigError("config key 'schedule': expected 'exp' or 'rational'");
    }

    DensityMatrix rho0 = [&]() -> DensityMatrix {
        if (state_kind == "coherent") {
            const double amp = cfg.get_double("state.amplitude", 1.0);
            const ComplexVector amps = osc::coherent_amplitudes(n, amp);
            return DensityMatrix(hermitize(amps * amps.adjoint()));
        }
        if (state_kind == "amps") {
            const std::vector<double> raw = cfg.get_double_list("state.amps", {});
            ComplexVector amps = ComplexVector::Zero(n);
            if (raw.empty() || static_cast<Eigen::Index>(raw.size()) > n) {
                throw ConfigError("config key 'state.amps': need 1.." + std::to_string(n) +
                                  " amplitudes");
            }
            for (std::size_t i = 0; i < raw.size(); ++i)
                amps[static_cast<Eigen::Index>(i)] = raw[i];
            const double norm = amps.norm();
            if (norm == 0.0) throw ConfigError("config key 'state.amps': zero state");
            amps /= norm;
            return DensityMatrix(hermitize(amps * amps.adjoint()));
        }
        if (state_kind == "thermal") {
            const double nbar = cfg.get_double("state.nbar", 0.5);
            const auto cutoff =
                static_cast<Eigen::Index>(cfg.get_int("state.cutoff", static_cast<int>(n / 3)));
            const RealVector w = osc::thermal_weights(n, nbar, cutoff);
            return DensityMatrix(hermitize(w.cast<Complex>().asDiagonal().toDenseMatrix()));
        }
        throw ConfigError("config key 'state': expected 'coherent', 'amps' or 'thermal'");
    }();
    cfg.require_all_consumed();

    const osc::CoefficientVector alpha0{alpha_list[0], alpha_list[1], alpha_list[2]};
    Trajectory trajectory{grid, {}, {}, {}, {}, 0.0, 0, {}};
    const osc::CrossValidationReport report =
        osc::cross_validate(basis, schedule, alpha0, grid, rho0, &trajectory);

    const double max_interior =
        std::max(report.max_interior_distance_h, report.max_interior_distance_i2);
    const bool interior_ok = max_interior <= interior_tol;
    const bool fixed_ok = report.fixed_solution_drift <= fixed_solution_tol;
    const bool coeff_ok = report.coefficient_cross_check <= coeff_check_tol;
    const bool conservation_ok = report.max_expectation_drift_h <= conservation_tol &&
                                 report.max_expectation_drift_i2 <= conservation_tol;
    const bool variance_ok = report.min_variance_increment_h >= -variance_slack &&
                             report.min_variance_increment_i2 >= -variance_slack;
    const bool rate_ok = report.min_rate_diag >= -1e-12;
    const bool pass =
        interior_ok && fixed_ok && coeff_ok && conservation_ok && variance_ok && rate_ok;

    // Trajectory in the standard layout, discrepancy report alongside it.
    std::ostringstream body;
    write_trajectory_csv(body, trajectory);
    std::ostringstream crossval_body;
    report.write_csv(crossval_body);
    std::filesystem::path crossval_path(out.csv_path);
    crossval_path.replace_extension(".crossval.csv");
    write_file(crossval_path.string(),
               out.timestamp ? timestamp_line() + crossval_body.str() : crossval_body.str());

    json summary;
    summary["kind"] = "oscillator-run";
    summary["crossval_report"] = crossval_path.string();
    summary["fock_dim"] = n;
    summary["margin"] = margin;
    summary["schedule"] = schedule.name;
    summary["max_interior_distance_h"] = report.max_interior_distance_h;
    summary["max_interior_distance_i2"] = report.max_interior_distance_i2;
    summary["coefficient_cross_check"] = report.coefficient_cross_check;
    summary["fixed_solution_drift"] = report.fixed_solution_drift;
    summary["max_expectation_drift_h"] = report.max_expectation_drift_h;
    summary["max_expectation_drift_i2"] = report.max_expectation_drift_i2;
    summary["min_variance_increment_h"] = report.min_variance_increment_h;
    summary["min_variance_increment_i2"] = report.min_variance_increment_i2;
    summary["min_covariance_rate_diagonal"] = report.min_rate_diag;
    summary["initial_leakage"] = report.initial_leakage;
    summary["schedule_has_zero_kdot"] = report.schedule_has_zero_kdot;
    summary["checks"] = {{"interior_agreement", interior_ok},
                         {"fixed_solution", fixed_ok},
                         {"coefficient_cross_check", coeff_ok},
                         {"conservation", conservation_ok},
                         {"variance_monotone", variance_ok},
                         {"rate_diagonal", rate_ok}};
    summary["pass"] = pass;
    emit(out, body.str(), summary);
    return pass ? kExitPass : kExitViolation;
}

int run_kraus_step_study(ConfigMap cfg) {
    const OutputSpec out = output_spec(cfg, "kraus_study.csv");
    const auto seed = cfg.get_seed("seed", 1234);
    Rng rng(seed);
    GklsSetup setup = build_gkls_setup(cfg, rng);
    const double t0 = cfg.get_double("grid.t0", 0.0);
    const double t1 = cfg.get_double("grid.t1", 1.0);
    const std::vector<double> dts =
        cfg.get_double_list("dts", {1e-2, 5e-3, 2.5e-3, 1.25e-3});
    const double slope_min = cfg.get_double("slope_min", 1.4);
    const double composition_slope_min = cfg.get_double("composition_slope_min", 0.9);
    cfg.require_all_consumed();

    if (dts.size() < 4) {
        throw ConfigError("config key 'dts': need at least 4 step sizes");
    }
    const double ratio = dts[1] / dts[0];
    for (std::size_t i = 1; i < dts.size(); ++i) {
        if (dts[i] <= 0.0 || dts[i] >= dts[i - 1]) {
            throw ConfigError("config key 'dts': entries must be positive and decreasing");
        }
        if (std::abs(dts[i] / dts[i - 1] - ratio) > 1e-6 * std::abs(ratio)) {
            throw ConfigError("config key 'dts': entries must form a geometric progression");
        }
    }
    const double horizon = t1 - t0;
    if (horizon <= 0.0) throw ConfigError("kraus study needs grid.t1 > grid.t0");

    // Reference state for the composition error: Runge-Kutta at a far finer
    // step than any studied dt.
    const int ref_steps = 4 * static_cast<int>(std::lround(horizon / dts.back()));
    const Trajectory ref = integrate(setup.model, setup.rho0,
                                      InvariantSet(setup.model.dim(), {}),
                                      TimeGrid(t0, t1, ref_steps), {});
    const ComplexMatrix rho_ref = ref.states.back().matrix();

    struct Row {
        double dt;
        double defect;
        double one_step_error;
        double composition_error;
    };
    std::vector<Row> rows;
    rows.reserve(dts.size());
    for (const double dt : dts) {
        const int n = static_cast<int>(std::lround(horizon / dt));
        if (std::abs(n * dt - horizon) > 1e-9 * horizon) {
            throw ConfigError("config key 'dts': every dt must divide the time horizon");
        }
        Row row{dt, 0.0, 0.0, 0.0};
        const KrausChannel step0 = kraus_step(setup.model, t0, dt);
        row.defect = step0.trace_preserving_defect();
        const ComplexMatrix one_step = apply_raw(step0, setup.rho0.matrix());
        row.one_step_error =
            (one_step - setup.rho0.matrix() - dt * rho_rhs_raw(setup.model, setup.rho0.matrix(), t0))
                .norm();
        ComplexMatrix rho = setup.rho0.matrix();
        for (int s = 0; s < n; ++s) {
            rho = apply_raw(kraus_step(setup.model, t0 + s * dt, dt), rho);
        }
        row.composition_error = (rho - rho_ref).norm();
        rows.push_back(row);
    }

    std::vector<double> xs, defect_ys, one_step_ys, comp_ys;
    for (const auto& row : rows) {
        if (row.defect > 1e-15) {
            xs.push_back(row.dt);
            defect_ys.push_back(row.defect);
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool defects_vanish = xs.size() < 2;
    const double defect_slope = defects_vanish ? nan : fit_loglog_slope(xs, defect_ys);

    std::vector<double> all_dts;
    for (const auto& row : rows) {
        all_dts.push_back(row.dt);
        one_step_ys.push_back(row.one_step_error);
        comp_ys.push_back(row.composition_error);
    }
    const bool one_step_vanishes =
        *std::max_element(one_step_ys.begin(), one_step_ys.end()) < 1e-15;
    const double one_step_slope =
        one_step_vanishes ? nan : fit_loglog_slope(all_dts, one_step_ys);
    const bool comp_vanishes = *std::max_element(comp_ys.begin(), comp_ys.end()) < 1e-13;
    const double comp_slope = comp_vanishes ? nan : fit_loglog_slope(all_dts, comp_ys);

    const bool defect_ok = defects_vanish || defect_slope >= slope_min;
    const bool one_step_ok = one_step_vanishes || one_step_slope >= slope_min;
    const bool comp_ok = comp_vanishes || comp_slope >= composition_slope_min;
    const bool pass = defect_ok && one_step_ok && comp_ok;

    std::ostringstream body;
    body << "dt,tp_defect,one_step_error,composition_error\n";
    for (const auto& row : rows) {
        body << csv::g17(row.dt) << ',' << csv::g17(row.defect) << ','
             << csv::g17(row.one_step_error) << ',' << csv::g17(row.composition_error) << '\n';
    }

    json summary;
    summary["kind"] = "kraus-step-study";
    summary["defect_slope"] = defect_slope;
    summary["one_step_slope"] = one_step_slope;
    summary["composition_slope"] = comp_slope;
    summary["defects_below_noise"] = defects_vanish;
    summary["slope_min"] = slope_min;
    summary["composition_slope_min"] = composition_slope_min;
    summary["checks"] = {{"defect_order", defect_ok},
                         {"one_step_order", one_step_ok},
                         {"composition_order", comp_ok}};
    summary["pass"] = pass;
    emit(out, body.str(), summary);
    return pass ? kExitPass : kExitViolation;
}

int run_scenario(ConfigMap cfg) {
    const std::string kind = cfg.get_string("kind", "");
    if (kind == "channel-audit") return run_channel_audit(std::move(cfg));
    if (kind == "unital-entropy-audit") return run_unital_entropy_audit(std::move(cfg));
    if (kind == "gkls-run") return run_gkls(std::move(cfg));
    if (kind == "oscillator-run") return run_oscillator(std::move(cfg));
    if (kind == "kraus-step-study") return run_kraus_step_study(std::move(cfg));
    throw ConfigError(kind.empty() ? "missing 'kind' entry"
                                   : "unknown scenario kind '" + kind + "'");
}

int run_scenario_catching(ConfigMap cfg) noexcept {
    try {
        return run_scenario(std::move(cfg));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericalError;
    }
}

}  // namespace weakinv
