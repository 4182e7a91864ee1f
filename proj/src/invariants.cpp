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

#include "weakinv/invariants.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "weakinv/csv.hpp"

namespace weakinv {

InvariantSet::InvariantSet(Eigen::Index d, std::vector<HermitianOperator> m)
    : dim(d), members(std::move(m)) {
    if (dim < 1) throw DimensionError("InvariantSet: dimension must be positive");
    for (const auto& member : members) {
        detail::require_same_dim(member.dim(), dim, "InvariantSet");
    }
}

HermitianOperator pull_back(const KrausChannel& phi, const HermitianOperator& i_final,
                            double tp_tol) {
    const auto check = is_trace_preserving(phi, tp_tol);
    if (!check.ok) {
        std::ostringstream msg;
        msg << "pull_back: trace-preserving defect " << check.defect << " exceeds " << tp_tol;
        throw InvalidChannelError(msg.str());
    }
    return adjoint_apply(phi, i_final);
}

double variance(const DensityMatrix& rho, const HermitianOperator& i) {
    detail::require_same_dim(rho.dim(), i.dim(), "variance");
    const double mean = expectation(rho, i);
    const double second = (i.matrix() * i.matrix() * rho.matrix()).trace().real();
    return second - mean * mean;
}

double covariance(const DensityMatrix& rho, const HermitianOperator& a,
                  const HermitianOperator& b) {
    detail::require_same_dim(rho.dim(), a.dim(), "covariance");
    detail::require_same_dim(rho.dim(), b.dim(), "covariance");
    const ComplexMatrix anti = a.matrix() * b.matrix() + b.matrix() * a.matrix();
    const double symmetric_moment = 0.5 * (anti * rho.matrix()).trace().real();
    return symmetric_moment - expectation(rho, a) * expectation(rho, b);
}

CovarianceMatrix covariance_matrix(const DensityMatrix& rho, const InvariantSet& set) {
    const auto k = static_cast<Eigen::Index>(set.size());
    RealMatrix values = RealMatrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            const double c = covariance(rho, set.members[static_cast<std::size_t>(i)],
                                        set.members[static_cast<std::size_t>(j)]);
            values(i, j) = c;
            values(j, i) = c;
        }
    }
    return {std::move(values)};
}

VarianceAuditReport audit_variance_growth(const std::vector<KrausChannel>& channels,
                                          const DensityMatrix& rho0,
                                          const HermitianOperator& i_final, double tp_tol,
                                          double slack) {
    for (std::size_t k = 0; k < channels.size(); ++k) {
        const auto check = is_trace_preserving(channels[k], tp_tol);
        if (!check.ok) {
            std::ostringstream msg;
            msg << "audit_variance_growth: channel " << k << " has trace-preserving defect "
                << check.defect;
            throw InvalidChannelError(msg.str());
        }
        detail::require_same_dim(channels[k].dim(), rho0.dim(), "audit_variance_growth");
    }
    detail::require_same_dim(rho0.dim(), i_final.dim(), "audit_variance_growth");

    const std::size_t n = channels.size();

    // Backward pass for the invariant, forward pass for the state.
    std::vector<HermitianOperator> invariants;
    invariants.reserve(n + 1);
    invariants.push_back(i_final);
    for (std::size_t k = n; k-- > 0;) {
        invariants.push_back(pull_back(channels[k], invariants.back(), tp_tol));
    }

    VarianceAuditReport report;
    report.min_variance_increment = std::numeric_limits<double>::infinity();

    DensityMatrix rho = rho0;
    double first_expectation = 0.0;
    double previous_variance = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const HermitianOperator& inv = invariants[n - k];
        const double e = expectation(rho, inv);
        const double v = variance(rho, inv);
        if (k == 0) {
            first_expectation = e;
        } else {
            report.max_expectation_drift =
                std::max(report.max_expectation_drift, std::abs(e - first_expectation));
            report.min_variance_increment =
                std::min(report.min_variance_increment, v - previous_variance);
        }
        previous_variance = v;
        report.steps.push_back({static_cast<int>(k), e, v});
        if (k < n) rho = apply(channels[k], rho, tp_tol);
    }
    if (n == 0) report.min_variance_increment = 0.0;

    report.expectation_conserved = report.max_expectation_drift <= slack;
    report.variance_monotone = report.min_variance_increment >= -slack;
    return report;
}

void VarianceAuditReport::write_csv(std::ostream& out) const {
    out << "step,expectation,variance\n";
    for (const auto& s : steps) {
        out << s.step << ',' << csv::g17(s.expectation) << ',' << csv::g17(s.variance) << '\n';
    }
}

nlohmann::json VarianceAuditReport::to_json() const {
    nlohmann::json j;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : steps) {
        rows.push_back({{"step", s.step},
                        {"expectation", s.expectation},
                        {"variance", s.variance}});
    }
    j["steps"] = std::move(rows);
    j["max_expectation_drift"] = max_expectation_drift;
    j["min_variance_increment"] = min_variance_increment;
    j["expectation_conserved"] = expectation_conserved;
    j["variance_monotone"] = variance_monotone;
    j["pass"] = passed();
    return j;
}

}  // namespace weakinv
