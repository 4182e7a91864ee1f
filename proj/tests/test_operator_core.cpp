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

#include <cmath>

#include "weakinv/operator_core.hpp"
#include "weakinv/rng.hpp"

using namespace weakinv;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

}  // namespace

TEST_CASE("hermitize on already Hermitian input is the identity") {
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    CHECK((hermitize(id).matrix() - id).norm() == doctest::Approx(0.0));
}

TEST_CASE("hermitize symmetrizes an upper-triangular nilpotent") {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    ComplexMatrix expected(2, 2);
    expected << 0.0, 0.5, 0.5, 0.0;
    CHECK((hermitize(m).matrix() - expected).norm() < 1e-15);
}

TEST_CASE("hermitize is idempotent on random matrices") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 8));
        ComplexMatrix g(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
        const ComplexMatrix once = hermitize(g).matrix();
        const ComplexMatrix twice = hermitize(once).matrix();
        CHECK((once - twice).norm() < 1e-14);
    }
}

TEST_CASE("hermitize rejects non-square input") {
    CHECK_THROWS_AS(hermitize(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("spectral_decompose of diagonal and Pauli operators") {
    const auto sz = spectral_decompose(HermitianOperator(pauli_z()));
    CHECK(sz.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(sz.eigenvalues[1] == doctest::Approx(1.0));

    const auto id3 = spectral_decompose(hermitize(ComplexMatrix::Identity(3, 3)));
    for (int i = 0; i < 3; ++i) CHECK(id3.eigenvalues[i] == doctest::Approx(1.0));

    // 2x2 characteristic polynomial of the flip operator gives -1, 1.
    const auto sx = spectral_decompose(HermitianOperator(pauli_x()));
    CHECK(sx.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(sx.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("spectral reconstruction over seeded random Hermitian matrices") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 16));
        ComplexMatrix g(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
        const HermitianOperator h = hermitize(g);
        const auto spec = spectral_decompose(h);
        const ComplexMatrix rebuilt =
            spec.eigenvectors * spec.eigenvalues.asDiagonal() * spec.eigenvectors.adjoint();
        CHECK((rebuilt - h.matrix()).norm() <= 1e-10 * std::max(1.0, h.matrix().norm()));
        for (Eigen::Index i = 1; i < dim; ++i) {
            CHECK(spec.eigenvalues[i] >= spec.eigenvalues[i - 1]);
        }
    }
}

TEST_CASE("expectation on reference states") {
    const DensityMatrix mixed(hermitize(0.5 * ComplexMatrix::Identity(2, 2)));
    CHECK(expectation(mixed, HermitianOperator(pauli_z())) == doctest::Approx(0.0));

    ComplexMatrix ground(2, 2);
    ground << 1.0, 0.0, 0.0, 0.0;
    CHECK(expectation(DensityMatrix(hermitize(ground)), HermitianOperator(pauli_z())) ==
          doctest::Approx(1.0));

    ComplexMatrix diag(2, 2);
    diag << 0.75, 0.0, 0.0, 0.25;
    CHECK(expectation(DensityMatrix(hermitize(diag)), HermitianOperator(pauli_z())) ==
          doctest::Approx(0.5));
}

TEST_CASE("expectation is real-linear in the observable") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const auto dim = static_cast<Eigen::Index>(rng.uniform_int(2, 6));
        const DensityMatrix rho = random_density(dim, rng);
        const HermitianOperator q1 = random_hermitian(dim, rng);
        const HermitianOperator q2 = random_hermitian(dim, rng);
        const double a = rng.normal();
        const double b = rng.normal();
        const HermitianOperator combo = hermitize(a * q1.matrix() + b * q2.matrix());
        CHECK(std::abs(expectation(rho, combo) - a * expectation(rho, q1) -
                       b * expectation(rho, q2)) < 1e-10);
    }
}

TEST_CASE("expectation rejects dimension mismatch") {
    const DensityMatrix rho(hermitize(ComplexMatrix::Identity(3, 3) / 3.0));
    CHECK_THROWS_AS(expectation(rho, HermitianOperator(pauli_z())), DimensionError);
}

TEST_CASE("matrix_function basics") {
    const HermitianOperator sx = hermitize(pauli_x());
    const auto ident = matrix_function(sx, [](double x) { return x; });
    CHECK((ident.matrix() - sx.matrix()).norm() < 1e-10);

    const auto squared = matrix_function(sx, [](double x) { return x * x; });
    CHECK((squared.matrix() - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

    ComplexMatrix d(2, 2);
    d << 4.0, 0.0, 0.0, 9.0;
    const auto roots = matrix_function(HermitianOperator(d), [](double x) { return std::sqrt(x); });
    ComplexMatrix expected(2, 2);
    expected << 2.0, 0.0, 0.0, 3.0;
    CHECK((roots.matrix() - expected).norm() < 1e-12);
}

TEST_CASE("matrix_function composition for polynomials") {
    Rng rng(3);
    const auto f = [](double x) { return x * x + 1.0; };
    const auto g = [](double x) { return 2.0 * x - 0.5; };
    for (int trial = 0; trial < 10; ++trial) {
        const HermitianOperator h = random_hermitian(4, rng);
        const auto composed = matrix_function(h, [&](double x) { return f(g(x)); });
        const auto chained = matrix_function(matrix_function(h, g), f);
        CHECK((composed.matrix() - chained.matrix()).norm() < 1e-9);
    }
}

TEST_CASE("matrix_function raises on undefined values") {
    ComplexMatrix d(2, 2);
    d << -1.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(
        matrix_function(HermitianOperator(d), [](double x) { return std::sqrt(x); }),
        DomainError);
}

TEST_CASE("density overload clips tiny negatives and rejects real ones") {
    ComplexMatrix nearly(2, 2);
    nearly << 1.0 + 5e-11, 0.0, 0.0, -5e-11;
    const auto logs = matrix_function(DensityMatrix(hermitize(nearly), 1e-9, 1e-9),
                                      [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; });
    CHECK(logs.matrix().allFinite());

    ComplexMatrix bad(2, 2);
    bad << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(matrix_function(DensityMatrix(hermitize(bad), 1e-9, 1.0),
                                    [](double x) { return x; }),
                    InvalidStateError);
}

TEST_CASE("validate_density reports pass and failure modes") {
    const auto ok = validate_density(0.5 * ComplexMatrix::Identity(2, 2));
    CHECK(ok.pass());
    CHECK(ok.min_eigenvalue == doctest::Approx(0.5));

    ComplexMatrix negative(2, 2);
    negative << 1.5, 0.0, 0.0, -0.5;
    const auto psd_fail = validate_density(negative);
    CHECK_FALSE(psd_fail.psd_ok);
    CHECK(psd_fail.min_eigenvalue == doctest::Approx(-0.5));
    CHECK(psd_fail.trace_ok);

    ComplexMatrix overweight(2, 2);
    overweight << 0.6, 0.0, 0.0, 0.6;
    const auto trace_fail = validate_density(overweight);
    CHECK_FALSE(trace_fail.trace_ok);
    CHECK(trace_fail.trace_defect == doctest::Approx(0.2));
    CHECK(trace_fail.psd_ok);
}

TEST_CASE("DensityMatrix constructor enforces the invariants") {
    ComplexMatrix overweight(2, 2);
    overweight << 0.6, 0.0, 0.0, 0.6;
    CHECK_THROWS_AS(DensityMatrix(hermitize(overweight)), InvalidStateError);

    ComplexMatrix negative(2, 2);
    negative << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix(hermitize(negative)), InvalidStateError);
}

TEST_CASE("HermitianOperator rejects a visibly non-Hermitian matrix") {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(HermitianOperator{m}, NumericalError);
}
