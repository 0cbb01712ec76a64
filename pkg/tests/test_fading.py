# -*- coding: utf-8 -*-
"""
大小尺度衰落分离测试
"""

import numpy as np
import pytest

from railchan.config import SPEED_OF_LIGHT
from railchan.errors import DomainError
from railchan.services.fading import separate_fading, track_coordinate, window_samples


def test_window_length_in_samples():
    assert window_samples(SPEED_OF_LIGHT / 93.2e9, 0.002) == 32


def test_constant_trace_has_unit_small_scale():
    x = np.arange(2000) * 0.001
    result = separate_fading(np.full(x.size, 0.02 + 0.01j), x, 0.005)
    np.testing.assert_allclose(result.small_scale, 1.0, rtol=1e-12)
    np.testing.assert_allclose(result.large_scale_db, 20 * np.log10(abs(0.02 + 0.01j)), rtol=1e-12)


def test_ripple_is_removed_from_large_scale():
    wavelength = 0.005
    x = np.arange(0.0, 200 * wavelength, wavelength / 20)
    env = 1.0 + 0.5 * np.cos(2 * np.pi * x / (2 * wavelength))
    result = separate_fading(env, x, wavelength)
    inner = result.large_scale_db[2:-2]
    instantaneous = 20 * np.log10(env)
    assert np.ptp(inner) * 20 <= np.ptp(instantaneous)
    assert np.diff(result.centers) == pytest.approx(10 * wavelength)


def test_reconstruction_identity(rng):
    x = np.sort(rng.uniform(0, 1.0, 3000))
    trace = rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size)
    result = separate_fading(trace, x, 0.004)
    np.testing.assert_allclose(result.small_scale * 10 ** (result.large_scale_interp_db / 20),
                               np.abs(trace)[np.argsort(x, kind="stable")], rtol=1e-10)


def test_three_dimensional_positions_use_arc_length():
    pts = np.column_stack([np.arange(5) * 0.3, np.arange(5) * 0.4, np.zeros(5)])
    np.testing.assert_allclose(track_coordinate(pts), np.arange(5) * 0.5)


def test_trace_shorter_than_window():
    x = np.arange(50) * 0.001
    with pytest.raises(DomainError):
        separate_fading(np.ones(50), x, 0.005)


def test_mismatched_lengths():
    with pytest.raises(DomainError):
        separate_fading(np.ones(10), np.arange(11) * 0.1, 0.005)
