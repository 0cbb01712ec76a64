# -*- coding: utf-8 -*-
"""
极化簿记测试
"""

import numpy as np
import pytest

from builders import make_path
from railchan.services.polarization import (
    compose_gain, diffraction_dyadic, polarization_basis, reflection_dyadic, scattering_dyadic
)

SQ2 = np.sqrt(2.0)


@pytest.mark.parametrize("d", [(1, 0, 0), (0.3, -0.7, 0.2), (0, 0, 1), (-1, 2, -3)])
def test_basis_is_orthonormal_and_transverse(d):
    d = np.asarray(d, dtype=float)
    b = polarization_basis(d)
    np.testing.assert_allclose(b.T @ b, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(b.T @ (d / np.linalg.norm(d)), 0.0, atol=1e-12)


def test_basis_symmetric_under_reversal():
    d = np.array([0.4, 0.5, -0.2])
    np.testing.assert_allclose(polarization_basis(d), polarization_basis(-d), atol=1e-15)


def test_vertical_follows_global_up():
    v = polarization_basis(np.array([1.0, 0.0, 0.0]))[:, 0]
    np.testing.assert_allclose(v, [0, 0, 1], atol=1e-15)


def test_los_gain_is_scalar_identity():
    a = 0.3 - 0.2j
    d = np.array([2.0, -1.0, 0.5])
    np.testing.assert_allclose(compose_gain(a, d, d), a * np.eye(2), atol=1e-15)


def test_ground_bounce_separates_soft_and_hard():
    u1 = np.array([1.0, 0.0, -1.0]) / SQ2
    u2 = np.array([1.0, 0.0, 1.0]) / SQ2
    gs, gh = -0.8 + 0.1j, 0.3 - 0.4j
    a = 0.01
    r = reflection_dyadic(u1, u2, np.array([0.0, 0.0, 1.0]), gs, gh)
    np.testing.assert_allclose(compose_gain(a, u1, u2, [r]), a * np.diag([gh, gs]), atol=1e-15)


def test_normal_incidence_on_conductor_flips_field():
    u1 = np.array([0.0, 1.0, 0.0])
    r = reflection_dyadic(u1, -u1, np.array([0.0, -1.0, 0.0]), -1.0, 1.0)
    np.testing.assert_allclose(compose_gain(1.0, u1, -u1, [r]), -np.eye(2), atol=1e-12)


def test_reflection_reciprocity():
    n = np.array([0.0, 0.0, 1.0])
    k_in = np.array([0.6, 0.3, -0.5])
    k_in /= np.linalg.norm(k_in)
    k_out = k_in - 2 * (k_in @ n) * n
    gs, gh = -0.5 + 0.2j, 0.4 + 0.1j
    forward = compose_gain(1.0, k_in, k_out, [reflection_dyadic(k_in, k_out, n, gs, gh)])
    backward = compose_gain(1.0, -k_out, -k_in, [reflection_dyadic(-k_out, -k_in, n, gs, gh)])
    np.testing.assert_allclose(backward, forward.T, atol=1e-12)


def test_diffraction_dyadic_reciprocity():
    e = np.array([0.0, 1.0, 0.0])
    s_in = np.array([1.0, 0.5, -0.3])
    s_out = np.array([0.7, 0.5, 0.8])
    t = diffraction_dyadic(e, s_in, s_out, 0.2 + 0.1j, -0.3j)
    t_rev = diffraction_dyadic(e, -s_out, -s_in, 0.2 + 0.1j, -0.3j)
    np.testing.assert_allclose(t_rev, t.T, atol=1e-12)


def test_scattering_dyadic_is_transverse():
    k_in = np.array([1.0, 0.0, -1.0]) / SQ2
    k_out = np.array([0.0, 1.0, 1.0]) / SQ2
    t = scattering_dyadic(k_in, k_out, 0.5)
    np.testing.assert_allclose(k_out @ t, 0.0, atol=1e-12)
    np.testing.assert_allclose(t @ k_in, 0.0, atol=1e-12)
    np.testing.assert_allclose(scattering_dyadic(-k_out, -k_in, 0.5), t.T, atol=1e-12)


def test_pol_gain_indexing_and_power():
    gain = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    path = make_path(1e-7, gain=gain)
    assert path.pol_gain("VV") == 1.0
    assert path.pol_gain("HV") == 2.0
    assert path.pol_gain("VH") == 3.0
    assert path.pol_gain("HH") == 4.0
    assert path.power == pytest.approx(15.0)
