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

#include "weakinv/channels.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace weakinv {

KrausChannel::KrausChannel(Eigen::Index dim, std::vector<ComplexMatrix> operators)
    : dim_(dim), operators_(std::move(operators)) {
    if (dim_ < 1) throw DimensionError("KrausChannel: dimension must be positive");
    if (operators_.empty()) throw InvalidChannelError("KrausChannel: empty Kraus family");
    for (const auto& v : operators_) {
        detail::require_square(v, "KrausChannel");
        detail::require_same_dim(v.rows(), dim_, "KrausChannel");
        detail::require_finite(v, "KrausChannel");
    }
}

double KrausChannel::trace_preserving_defect() const {
    ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& v : operators_) acc += v.adjoint() * v;
    return (acc - ComplexMatrix::Identity(dim_, dim_)).norm();
}

double KrausChannel::unital_defect() const {
    ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& v : operators_) acc += v * v.adjoint();
    return (acc - ComplexMatrix::Identity(dim_, dim_)).norm();
}

ChannelCheck is_trace_preserving(const KrausChannel& phi, double tolerance) {
    const double defect = phi.trace_preserving_defect();
    return {defect <= tolerance, defect};
}

ChannelCheck is_unital(const KrausChannel& phi, double tolerance) {
    const double defect = phi.unital_defect();
    return {defect <= tolerance, defect};
}

ComplexMatrix apply_raw(const KrausChannel& phi, const ComplexMatrix& rho) {
    detail::require_same_dim(phi.dim(), rho.rows(), "apply");
    ComplexMatrix out = ComplexMatrix::Zero(phi.dim(), phi.dim());
    for (const auto& v : phi.operators()) out += v * rho * v.adjoint();
    return out;
}

DensityMatrix apply(const KrausChannel& phi, const DensityMatrix& rho, double tp_tol,
                    double psd_tol) {
    const auto check = is_trace_preserving(phi, tp_tol);
    if (!check.ok) {
        std::ostringstream msg;
        msg << "apply: trace-preserving defect " << check.defect << " exceeds " << tp_tol;
        throw InvalidChannelError(msg.str());
    }
    ComplexMatrix out = apply_raw(phi, rho.matrix());
    return DensityMatrix(hermitize(out), tol::structural, psd_tol);
}

ComplexMatrix adjoint_apply_raw(const KrausChannel& phi, const ComplexMatrix& q) {
    detail::require_same_dim(phi.dim(), q.rows(), "adjoint_apply");
    ComplexMatrix out = ComplexMatrix::Zero(phi.dim(), phi.dim());
    for (const auto& v : phi.operators()) out += v.adjoint() * q * v;
    return out;
}

HermitianOperator adjoint_apply(const KrausChannel& phi, const HermitianOperator& q) {
    return hermitize(adjoint_apply_raw(phi, q.matrix()));
}

KrausChannel compose(const KrausChannel& phi2, const KrausChannel& phi1) {
    detail::require_same_dim(phi2.dim(), phi1.dim(), "compose");
    std::vector<ComplexMatrix> ops;
    ops.reserve(phi2.operators().size() * phi1.operators().size());
    for (const auto& b : phi2.operators())
        for (const auto& a : phi1.operators()) ops.push_back(b * a);
    return KrausChannel(phi1.dim(), std::move(ops));
}

DilationSpec::DilationSpec(Eigen::Index sys, Eigen::Index env, ComplexMatrix u, ComplexVector phi)
    : sys_dim(sys), env_dim(env), unitary(std::move(u)), env_state(std::move(phi)) {
    if (sys_dim < 1 || env_dim < 1) {
        throw DimensionError("DilationSpec: dimensions must be positive");
    }
    const Eigen::Index total = sys_dim * env_dim;
    detail::require_square(unitary, "DilationSpec");
    detail::require_same_dim(unitary.rows(), total, "DilationSpec");
    if (env_state.size() != env_dim) {
        throw DimensionError("DilationSpec: environment state has wrong length");
    }
    const double unit_defect =
        (unitary.adjoint() * unitary - ComplexMatrix::Identity(total, total)).norm();
    if (unit_defect > tol::structural) {
        std::ostringstream msg;
        msg << "DilationSpec: unitarity defect " << unit_defect;
        throw NumericalError(msg.str());
    }
    if (std::abs(env_state.norm() - 1.0) > tol::unit_norm) {
        std::ostringstream msg;
        msg << "DilationSpec: environment state norm " << env_state.norm();
        throw NumericalError(msg.str());
    }
}

KrausChannel kraus_from_dilation(const DilationSpec& spec) {
    const Eigen::Index s = spec.sys_dim;
    const Eigen::Index e = spec.env_dim;
    std::vector<ComplexMatrix> ops;
    ops.reserve(e);
    for (Eigen::Index n = 0; n < e; ++n) {
        ComplexMatrix v(s, s);
        for (Eigen::Index a = 0; a < s; ++a) {
            for (Eigen::Index ap = 0; ap < s; ++ap) {
                Complex acc(0.0, 0.0);
                for (Eigen::Index bp = 0; bp < e; ++bp) {
                    acc += spec.unitary(a * e + n, ap * e + bp) * spec.env_state[bp];
                }
                v(a, ap) = acc;
            }
        }
        if (v.norm() >= tol::null_kraus) ops.push_back(std::move(v));
    }
    if (ops.empty()) throw InvalidChannelError("kraus_from_dilation: all operators are null");
    return KrausChannel(s, std::move(ops));
}

std::vector<double> povm_probabilities(const DilationSpec& spec, const DensityMatrix& rho) {
    detail::require_same_dim(spec.sys_dim, rho.dim(), "povm_probabilities");
    const Eigen::Index s = spec.sys_dim;
    const Eigen::Index e = spec.env_dim;
    std::vector<double> probs;
    probs.reserve(e);
    // Build every V_n directly (without the null-operator drop) so outcome
    // indices line up with the environment basis.
    for (Eigen::Index n = 0; n < e; ++n) {
        ComplexMatrix v(s, s);
        for (Eigen::Index a = 0; a < s; ++a) {
            for (Eigen::Index ap = 0; ap < s; ++ap) {
                Complex acc(0.0, 0.0);
                for (Eigen::Index bp = 0; bp < e; ++bp) {
                    acc += spec.unitary(a * e + n, ap * e + bp) * spec.env_state[bp];
                }
                v(a, ap) = acc;
            }
        }
        probs.push_back((v * rho.matrix() * v.adjoint()).trace().real());
    }
    return probs;
}

double naimark_check(const DilationSpec& spec, const ComplexVector& psi) {
    detail::require_same_dim(spec.sys_dim, psi.size(), "naimark_check");
    if (std::abs(psi.norm() - 1.0) > tol::unit_norm) {
        std::ostringstream msg;
        msg << "naimark_check: state norm " << psi.norm() << " is not 1";
        throw DomainError(msg.str());
    }
    const Eigen::Index s = spec.sys_dim;
    const Eigen::Index e = spec.env_dim;
    const Eigen::Index total = s * e;

    // Projective side, assembled in the dilated space.
    ComplexVector joint(total);
    for (Eigen::Index a = 0; a < s; ++a)
        for (Eigen::Index b = 0; b < e; ++b) joint[a * e + b] = psi[a] * spec.env_state[b];

    const ComplexMatrix joint_density = joint * joint.adjoint();
    std::vector<double> projective(e, 0.0);
    for (Eigen::Index n = 0; n < e; ++n) {
        ComplexMatrix selector = ComplexMatrix::Zero(total, total);
        for (Eigen::Index a = 0; a < s; ++a) selector(a * e + n, a * e + n) = 1.0;
        const ComplexMatrix projector = spec.unitary.adjoint() * selector * spec.unitary;
        projective[n] = (projector * joint_density).trace().real();
    }

    // Kraus side.
    const DensityMatrix rho(hermitize(psi * psi.adjoint()));
    const std::vector<double> povm = povm_probabilities(spec, rho);

    double worst = 0.0;
    for (Eigen::Index n = 0; n < e; ++n) {
        worst = std::max(worst, std::abs(projective[n] - povm[n]));
    }
    return worst;
}

DilationSpec random_dilation(Eigen::Index sys_dim, Eigen::Index env_dim, std::uint64_t seed) {
    if (sys_dim < 1 || env_dim < 1) {
        throw DimensionError("random_dilation: dimensions must be positive");
    }
    Rng rng(seed);
    ComplexMatrix u = haar_unitary(sys_dim * env_dim, rng);
    ComplexVector phi = ComplexVector::Zero(env_dim);
    phi[0] = 1.0;
    return DilationSpec(sys_dim, env_dim, std::move(u), std::move(phi));
}

KrausChannel random_channel(Eigen::Index sys_dim, Eigen::Index env_dim, std::uint64_t seed) {
    return kraus_from_dilation(random_dilation(sys_dim, env_dim, seed));
}

KrausChannel random_mixed_unitary_channel(Eigen::Index dim, int unitary_count,
                                          std::uint64_t seed) {
    if (unitary_count < 1) {
        throw DomainError("random_mixed_unitary_channel: need at least one unitary");
    }
    Rng rng(seed);
    std::vector<double> weights(static_cast<std::size_t>(unitary_count));
    double total = 0.0;
    for (auto& w : weights) {
        w = 0.1 + rng.uniform();
        total += w;
    }
    std::vector<ComplexMatrix> ops;
    ops.reserve(weights.size());
    for (const double w : weights) {
        ops.push_back(std::sqrt(w / total) * haar_unitary(dim, rng));
    }
    return KrausChannel(dim, std::move(ops));
}

KrausChannel amplitude_damping_channel(double gamma) {
    if (gamma < 0.0 || gamma > 1.0) {
        throw DomainError("amplitude_damping_channel: gamma must lie in [0, 1]");
    }
    ComplexMatrix v0(2, 2), v1(2, 2);
    v0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
    v1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
    std::vector<ComplexMatrix> ops;
    ops.push_back(std::move(v0));
    if (gamma > 0.0) ops.push_back(std::move(v1));
    return KrausChannel(2, std::move(ops));
}

void save_channel(std::ostream& out, const KrausChannel& phi) {
    nlohmann::json j;
    j["dim"] = phi.dim();
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& v : phi.operators()) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < v.cols(); ++c) {
                row.push_back({v(r, c).real(), v(r, c).imag()});
            }
            rows.push_back(std::move(row));
        }
        ops.push_back(std::move(rows));
    }
    j["operators"] = std::move(ops);
    out << j.dump(2) << '\n';
}

KrausChannel load_channel(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("load_channel: ") + e.what());
    }
    if (!j.contains("dim") || !j.contains("operators")) {
        throw ConfigError("load_channel: record needs 'dim' and 'operators'");
    }
    const auto dim = j["dim"].get<Eigen::Index>();
    std::vector<ComplexMatrix> ops;
    for (const auto& rows : j["operators"]) {
        ComplexMatrix v(dim, dim);
        if (static_cast<Eigen::Index>(rows.size()) != dim) {
            throw ConfigError("load_channel: operator row count mismatch");
        }
        for (Eigen::Index r = 0; r < dim; ++r) {
            const auto& row = rows[static_cast<std::size_t>(r)];
            if (static_cast<Eigen::Index>(row.size()) != dim) {
                throw ConfigError("load_channel: operator column count mismatch");
            }
            for (Eigen::Index c = 0; c < dim; ++c) {
                const auto& entry = row[static_cast<std::size_t>(c)];
                v(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
            }
        }
        ops.push_back(std::move(v));
    }
    return KrausChannel(dim, std::move(ops));
}

}  // namespace weakinv
