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

#include <iosfwd>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "weakinv/channels.hpp"
#include "weakinv/operator_core.hpp"

namespace weakinv {

/// Ordered family of Hermitian observables sharing one dimension. The
/// sequence order fixes the covariance-matrix index order.
struct InvariantSet {
    Eigen::Index dim;
    std::vector<HermitianOperator> members;

    InvariantSet(Eigen::Index d, std::vector<HermitianOperator> m);
    std::size_t size() const noexcept { return members.size(); }
};

/// Real symmetric matrix of symmetrized second moments; the diagonal holds
/// the variances.
struct CovarianceMatrix {
    RealMatrix values;
};

/// Backward step of a weak invariant: I(t) = Phi^*(I(t')). The channel must
/// be trace-preserving so that expectation values are conserved.
HermitianOperator pull_back(const KrausChannel& phi, const HermitianOperator& i_final,
                            double tp_tol = tol::structural);

/// <I^2> - <I>^2.
double variance(const DensityMatrix& rho, const HermitianOperator& i);

/// (1/2) <{A, B}> - <A><B>. Symmetric, bilinear; covariance(rho, I, I) is
/// the variance.
double covariance(const DensityMatrix& rho, const HermitianOperator& a,
                  const HermitianOperator& b);

CovarianceMatrix covariance_matrix(const DensityMatrix& rho, const InvariantSet& set);

struct VarianceAuditStep {
    int step;
    double expectation;
    double variance;
};

/// Result of pulling a final observable backward through a channel chain
/// while pushing the state forward, recording how the conserved expectation
/// and the growing variance behave at every intermediate time.
struct VarianceAuditReport {
    std::vector<VarianceAuditStep> steps;
    double max_expectation_drift = 0.0;
    double min_variance_increment = 0.0;
    bool expectation_conserved = false;
    bool variance_monotone = false;

    bool passed() const noexcept { return expectation_conserved && variance_monotone; }
    void write_csv(std::ostream& out) const;  // step, expectation, variance
    nlohmann::json to_json() const;           // full record with violation flags
};

/// Chains may be non-unital; only the trace-preserving condition is needed
/// for the variance to grow.
VarianceAuditReport audit_variance_growth(const std::vector<KrausChannel>& channels,
                                          const DensityMatrix& rho0,
                                          const HermitianOperator& i_final,
                                          double tp_tol = tol::structural,
                                          double slack = tol::structural);

}  // namespace weakinv
