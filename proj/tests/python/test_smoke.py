# Copyright 2026 The qgas Authors
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

import math

import numpy as np
import pytest

import qgas


def test_version():
    assert qgas.__version__.count(".") == 2


def test_pfaffian_squares_to_determinant():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(6, 6))
    a = a - a.T
    assert qgas.pfaffian(a) ** 2 == pytest.approx(np.linalg.det(a), rel=1e-10)
    assert qgas.pfaffian(np.array([[0.0, 2.5], [-2.5, 0.0]])) == pytest.approx(2.5)


def test_pfaffian_rejects_symmetric():
    with pytest.raises(ValueError):
        qgas.pfaffian(np.eye(2))


def test_box_series_starts_at_one_and_drops():
    d = np.asarray(qgas.box_series(10, samples=513))
    assert d.shape == (513,)
    assert np.all(d >= 0.0)
    assert d.mean() < d[0]


def test_box_average_within_bound():
    r = qgas.box_time_average(10, samples=1025)
    assert r["within_bound"]
    assert 0.0 < r["mean"] < r["bound"]


def test_central_mass_matches_erf_at_start():
    assert qgas.central_mass(10.0, 0.0) == pytest.approx(math.erf(2.0), abs=1.3e-4)
    assert qgas.central_mass_numeric(10.0, 0.0) == pytest.approx(math.erf(2.0), abs=1e-12)


def test_ring_spectrum():
    e = np.sort(np.asarray(qgas.ring_energies(8)))
    expected = np.sort(np.cos(2 * np.pi * np.arange(8) / 8))
    np.testing.assert_allclose(e, expected, atol=1e-12)


def test_ring_correlator_initial_value():
    c = qgas.ring_correlator(20, 0, 0, [0.0, 1.0])
    assert c[0] == pytest.approx(1.0)
    assert abs(c[1]) <= 1.0 + 1e-12


def test_weighted_average():
    r = qgas.weighted_average(0.7, 3.0)
    assert r["numeric"] == pytest.approx(r["analytic"], abs=1e-8)
