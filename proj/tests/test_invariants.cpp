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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "weakinv/invariants.hpp"

using namespace weakinv;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

DensityMatrix diag_state(double p0, double p1) {
    ComplexMatrix m(2, 2);
    m << p0, 0.0, 0.0, p1;
    return DensityMatrix(hermitize(m));
}

}  // namespace

TEST_CASE("pull_back basics") {
    const KrausChannel id(2, {ComplexMatrix::Identity(2, 2)});
    const HermitianOperator identity_image =
        pull_back(id, hermitize(ComplexMatrix::Identity(2, 2)));
    CHECK((identity_image.matrix() - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

    Rng rng(3);
    const ComplexMatrix u = haar_unitary(3, rng);
    const KrausChannel unitary(3, {u});
    const HermitianOperator target = random_hermitian(3, rng);
    const HermitianOperator pulled = pull_back(unitary, target);
    CHECK((pulled.matrix() - u.adjoint() * target.matrix() * u).norm() < 1e-12);

    const KrausChannel damp = amplitude_damping_channel(0.5);
    const HermitianOperator sz_pulled = pull_back(damp, hermitize(pauli_z()));
    ComplexMatrix expected(2, 2);
    expected << 1.0, 0.0, 0.0, 0.0;
    CHECK((sz_pulled.matrix() - expected).norm() < 1e-15);
}

TEST_CASE("pull_back conserves expectations against the pushed-forward state") {
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 4));
        const KrausChannel phi = random_channel(
            dim, static_cast<Eigen::Index>(rng.uniform_int(2, 4)), rng.next_u64());
        const DensityMatrix rho = random_density(dim, rng);
        const HermitianOperator i_final = random_hermitian(dim, rng);
        const double before = expectation(rho, pull_back(phi, i_final));
        const double after = expectation(apply(phi, rho), i_final);
        CHECK(std::abs(before - after) < 1e-10);
    }
}

TEST_CASE("variance reference values") {
    ComplexMatrix ground(2, 2);
    ground << 1.0, 0.0, 0.0, 0.0;
    CHECK(variance(DensityMatrix(hermitize(ground)), hermitize(pauli_z())) ==
          doctest::Approx(0.0));
    CHECK(variance(diag_state(0.5, 0.5), hermitize(pauli_z())) == doctest::Approx(1.0));
    CHECK(variance(diag_state(0.75, 0.25), hermitize(pauli_z())) == doctest::Approx(0.75));
}

TEST_CASE("covariance properties and reference values") {
    const DensityMatrix mixed = diag_state(0.5, 0.5);
    const HermitianOperator sx = hermitize(pauli_x());
    const HermitianOperator sy = hermitize(pauli_y());

    CHECK(covariance(mixed, sx, sx) == variance(mixed, sx));
    CHECK(covariance(mixed, sx, sy) == doctest::Approx(0.0));

    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 5));
        const DensityMatrix rho = random_density(dim, rng);
        const HermitianOperator a = random_hermitian(dim, rng);
        const HermitianOperator b = random_hermitian(dim, rng);
        CHECK(std::abs(covariance(rho, a, b) - covariance(rho, b, a)) < 1e-12);
        // Identity has zero covariance with anything.
        CHECK(std::abs(covariance(rho, a, hermitize(ComplexMatrix::Identity(dim, dim)))) <
              1e-12);
        // Bilinearity in the first slot.
        const double s = rng.normal();
        const HermitianOperator combo = hermitize(s * a.matrix() + b.matrix());
        CHECK(std::abs(covariance(rho, combo, b) - s * covariance(rho, a, b) -
                       covariance(rho, b, b)) < 1e-10);
    }
}

TEST_CASE("covariance_matrix structure") {
    const DensityMatrix mixed = diag_state(0.5, 0.5);
    const HermitianOperator sx = hermitize(pauli_x());
    const HermitianOperator sy = hermitize(pauli_y());

    const auto singleton = covariance_matrix(mixed, InvariantSet(2, {sx}));
    CHECK(singleton.values.rows() == 1);
    CHECK(singleton.values(0, 0) == doctest::Approx(variance(mixed, sx)));

    const auto pair = covariance_matrix(mixed, InvariantSet(2, {sx, sy}));
    CHECK(pair.values(0, 0) == doctest::Approx(1.0));
    CHECK(pair.values(1, 1) == doctest::Approx(1.0));
    CHECK(pair.values(0, 1) == doctest::Approx(0.0));

    const auto duplicated = covariance_matrix(mixed, InvariantSet(2, {sx, sx}));
    const double v = variance(mixed, sx);
    CHECK(duplicated.values(0, 1) == doctest::Approx(v));
    CHECK(duplicated.values(1, 0) == doctest::Approx(v));

    const auto empty = covariance_matrix(mixed, InvariantSet(2, {}));
    CHECK(empty.values.rows() == 0);
    CHECK(empty.values.cols() == 0);
}

TEST_CASE("covariance matrices of random sets are positive semidefinite") {
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 5));
        std::vector<HermitianOperator> members;
        const int k = static_cast<int>(rng.uniform_int(2, 4));
        for (int i = 0; i < k; ++i) members.push_back(random_hermitian(dim, rng));
        const auto cov =
            covariance_matrix(random_density(dim, rng), InvariantSet(dim, members));
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(cov.values);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-8);
    }
}

TEST_CASE("operator convexity witness: Phi*(J^2) - Phi*(J)^2 is PSD") {
    Rng rng(61);
    for (int trial = 0; trial < 25; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 4));
        const KrausChannel phi = random_channel(
            dim, static_cast<Eigen::Index>(rng.uniform_int(2, 4)), rng.next_u64());
        const HermitianOperator j = random_hermitian(dim, rng);
        const ComplexMatrix lifted_square =
            adjoint_apply(phi, hermitize(j.matrix() * j.matrix())).matrix();
        const ComplexMatrix squared_lift = [&] {
            const ComplexMatrix image = adjoint_apply(phi, j).matrix();
            return (image * image).eval();
        }();
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(lifted_square - squared_lift,
                                                            Eigen::EigenvaluesOnly);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("audit: single unitary channel keeps variance exactly constant") {
    Rng rng(71);
    const ComplexMatrix u = haar_unitary(3, rng);
    const auto report = audit_variance_growth({KrausChannel(3, {u})}, random_density(3, rng),
                                              random_hermitian(3, rng));
    CHECK(report.passed());
    CHECK(std::abs(report.min_variance_increment) < 1e-12);
    CHECK(report.max_expectation_drift < 1e-12);
}

TEST_CASE("audit: amplitude damping on the maximally mixed state grows variance 0.25 -> 0.75") {
    const auto report = audit_variance_growth({amplitude_damping_channel(0.5)},
                                              diag_state(0.5, 0.5), hermitize(pauli_z()));
    REQUIRE(report.steps.size() == 2);
    CHECK(report.steps[0].variance == doctest::Approx(0.25));
    CHECK(report.steps[1].variance == doctest::Approx(0.75));
    CHECK(report.passed());
}

TEST_CASE("audit: seeded random non-unital chains never violate monotonicity") {
    Rng rng(81);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 4));
        const int chain = static_cast<int>(rng.uniform_int(1, 5));
        std::vector<KrausChannel> channels;
        for (int k = 0; k < chain; ++k) {
            channels.push_back(random_channel(
                dim, static_cast<Eigen::Index>(rng.uniform_int(2, 4)), rng.next_u64()));
        }
        const auto report = audit_variance_growth(channels, random_density(dim, rng),
                                                  random_hermitian(dim, rng));
        CHECK(report.max_expectation_drift <= 1e-10);
        CHECK(report.min_variance_increment >= -1e-10);
    }
}

TEST_CASE("audit rejects non-trace-preserving chains") {
    const KrausChannel broken(2, {0.5 * ComplexMatrix::Identity(2, 2)});
    CHECK_THROWS_AS(
        audit_variance_growth({broken}, diag_state(0.5, 0.5), hermitize(pauli_z())),
        InvalidChannelError);
}

TEST_CASE("audit report CSV layout") {
    const auto report = audit_variance_growth({amplitude_damping_channel(0.5)},
                                              diag_state(0.5, 0.5), hermitize(pauli_z()));
    std::ostringstream out;
    report.write_csv(out);
    const std::string text = out.str();
    CHECK(text.rfind("step,expectation,variance\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
