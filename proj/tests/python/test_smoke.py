# Copyright 2026 The weakinv Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the compiled extension."""

import math

import numpy as np
import pytest

import weakinv as wv

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
MIXED = 0.5 * np.eye(2, dtype=complex)
PLUS = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)


def test_entropies():
    assert wv.von_neumann(MIXED) == pytest.approx(math.log(2.0))
    rho = np.diag([0.75, 0.25]).astype(complex)
    assert wv.von_neumann(rho) == pytest.approx(0.5623351446188083)
    assert wv.renyi(rho, 2.0) == pytest.approx(-math.log(0.625))
    assert wv.linear_entropy(rho) == pytest.approx(0.375)
    assert wv.alpha_expectation(rho, SZ, 2.0) == pytest.approx(0.8)


def test_channels_and_invariants():
    kraus = wv.amplitude_damping_channel(0.5)
    ok, defect = wv.is_trace_preserving(kraus)
    assert ok and defect < 1e-12
    ok, _ = wv.is_unital(kraus)
    assert not ok

    damped = wv.apply_channel(kraus, MIXED)
    assert np.allclose(np.diag(damped), [0.75, 0.25])

    pulled = wv.pull_back(kraus, SZ)
    assert wv.variance(MIXED, pulled) == pytest.approx(0.25)
    assert wv.variance(damped, SZ) == pytest.approx(0.75)
    # Entropy falls while the invariant variance grows.
    assert wv.von_neumann(damped) < wv.von_neumann(MIXED)


def test_random_channel_determinism():
    a = wv.random_channel(2, 2, 42)
    b = wv.random_channel(2, 2, 42)
    assert len(a) == len(b)
    for va, vb in zip(a, b):
        assert np.array_equal(va, vb)


def test_integrate_dephasing():
    out = wv.integrate(
        np.zeros((2, 2), dtype=complex),
        [(0.25, SZ)],
        PLUS,
        [SX],
        t0=0.0,
        t1=1.0,
        steps=1000,
    )
    final = out["final_state"]
    assert final[0, 1].real == pytest.approx(0.5 * math.exp(-1.0), abs=1e-8)
    assert out["max_expectation_drift"] < 1e-10
    variances = out["variances"][:, 0]
    assert np.all(np.diff(variances) >= -1e-10)
    assert wv.variance_rate(np.zeros((2, 2), dtype=complex), [(0.25, SZ)], PLUS, SX) == (
        pytest.approx(2.0)
    )


def test_su11_and_coefficients():
    k1, k2, k3 = wv.su11_basis(16)
    assert k1[0, 0].real == pytest.approx(0.25)
    assert k2[0, 0].real == pytest.approx(0.25)
    comm = k1 @ k2 - k2 @ k1
    assert np.linalg.norm((comm + 1j * k3)[:12, :12]) < 1e-10

    path = wv.propagate_coefficients([1.0, 1.0, 0.0], 0.0, 1.0, 1000, "exp", 1.0, 1.0)
    assert path[-1, 0] == pytest.approx(1.0, abs=1e-8)
    assert path[-1, 1] == pytest.approx(math.exp(-1.0), abs=1e-8)
    assert abs(path[-1, 2]) < 1e-8


def test_error_mapping():
    with pytest.raises(ValueError):
        wv.renyi(MIXED, -1.0)
    with pytest.raises(ValueError):
        wv.expectation(MIXED, np.zeros((3, 3), dtype=complex))
