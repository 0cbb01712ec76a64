# -*- coding: utf-8 -*-
"""
随机信道模型测试：拟合、合成、闭环、参数文件
"""

import dataclasses
import math

import numpy as np
import pytest
from scipy import signal

from railchan.config import DEFAULT_RAYS_PER_CLUSTER
from railchan.errors import DomainError, FitError, ValidationError
from railchan.models.channel import BandSpec, TrajectorySpec
from railchan.models.stats import LinkStats, PathLossFit
from railchan.services.channel import narrowband_gain
from railchan.services.stats import fit_ricean
from railchan.services.stochgen import (
    decorrelation_distance, default_params, fit_params, load_params, save_params, shadow_process,
    synthesize, synthesize_snapshots, validate_roundtrip
)


def _synthetic_stats(rng, n):
    d = 10.0 ** rng.uniform(1.0, 3.0, n)
    pl = 70.0 + 20.0 * np.log10(d) + rng.normal(0.0, 3.0, n)
    k = rng.normal(6.0, 2.0, n)
    ds = 10.0 ** rng.normal(-7.5, 0.2, n)
    spread = 10.0 ** rng.normal(1.2, 0.1, (n, 4))
    stats = [LinkStats(pl[i], k[i], ds[i], 1e6, *spread[i]) for i in range(n)]
    return stats, d


def test_fit_recovers_parameters(rng):
    stats, d = _synthetic_stats(rng, 10_000)
    params = fit_params(stats, d)
    assert params.pl.pl0_db == pytest.approx(70.0, abs=0.3)
    assert params.pl.n == pytest.approx(2.0, abs=0.05)
    assert params.pl.sigma_sf_db == pytest.approx(3.0, abs=0.1)
    assert params.k_db[0] == pytest.approx(6.0, abs=0.1)
    assert params.k_db[1] == pytest.approx(2.0, abs=0.1)
    assert params.ds_log[0] == pytest.approx(-7.5, abs=0.01)
    assert params.ds_log[1] == pytest.approx(0.2, abs=0.01)
    assert params.as_log["ASA"][0] == pytest.approx(1.2, abs=0.01)


def test_fit_of_constant_statistics_has_zero_spread():
    d = np.geomspace(10.0, 200.0, 60)
    stats = [LinkStats(90.0, 5.0, 30e-9, 1e6, 10.0, 10.0, 3.0, 3.0)] * len(d)
    params = fit_params(stats, d)
    assert params.pl.sigma_sf_db == pytest.approx(0.0, abs=1e-9)
    assert params.k_db == pytest.approx((5.0, 0.0))
    assert params.ds_log[1] == pytest.approx(0.0, abs=1e-12)
    assert params.as_log["ESD"][1] == pytest.approx(0.0, abs=1e-12)


def test_fit_requires_enough_snapshots_and_range():
    stats = [LinkStats(90.0, 5.0, 30e-9, 1e6, 10.0, 10.0, 3.0, 3.0)]
    with pytest.raises(FitError):
        fit_params(stats * 49, np.geomspace(10.0, 200.0, 49))
    with pytest.raises(FitError):
        fit_params(stats * 60, np.linspace(10.0, 90.0, 60))


def test_decorrelation_distance_of_ar1_process(rng):
    rho = math.exp(-1.0 / 25.0)
    noise = rng.standard_normal(100_000)
    shadow = signal.lfilter([math.sqrt(1.0 - rho ** 2)], [1.0, -rho], noise)
    x = np.arange(shadow.size, dtype=float)
    assert decorrelation_distance(x, shadow) == pytest.approx(25.0, abs=5.0)


def _trajectory():
    return TrajectorySpec((20.0, 0.0, 0.0), (1.0, 0.0, 0.0), 50.0, 0.002, 40)


def test_synthesis_is_reproducible():
    band = BandSpec(60e9, 400e6, 101)
    a = [c.H for c in synthesize(default_params(), _trajectory(), band, seed=4)]
    b = [c.H for c in synthesize(default_params(), _trajectory(), band, seed=4)]
    c = [c.H for c in synthesize(default_params(), _trajectory(), band, seed=5)]
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)
    assert len(a) == 40
    assert a[0].shape == (101, 4)


def test_infinite_k_gives_flat_ctf():
    params = dataclasses.replace(default_params(), k_db=(math.inf, 0.0))
    band = BandSpec(60e9, 400e6, 101)
    for ctf in synthesize(params, _trajectory(), band, seed=1):
        mag = np.abs(ctf.column("VV"))
        np.testing.assert_allclose(mag, mag[0], rtol=1e-12)
        np.testing.assert_allclose(ctf.column("VH"), 0.0, atol=1e-30)


@pytest.mark.slow
def test_roundtrip_recovers_parameters():
    params = default_params()
    report = validate_roundtrip(params, 10_000, seed=2024)
    assert abs(report.deltas["k_mean_db"]) < 0.5
    assert abs(report.deltas["ds_log_mean"]) < 0.05
    assert abs(report.deltas["pl.n"]) < 0.05
    assert abs(report.deltas["shadow_decorrelation_rel"]) < 0.2
    assert not report.wide_confidence


def test_roundtrip_with_few_links_is_flagged():
    report = validate_roundtrip(default_params(), 10, seed=1)
    assert report.wide_confidence
    assert report.n_links == 10


def test_roundtrip_needs_two_links():
    with pytest.raises(ValidationError) as excinfo:
        validate_roundtrip(default_params(), 1, seed=1)
    assert "n_links" in excinfo.value.fields


def test_params_file_round_trip(tmp_path):
    path = tmp_path / "params.ini"
    save_params(str(path), default_params())
    assert load_params(str(path)) == default_params()


def test_params_file_with_unknown_key(tmp_path):
    path = tmp_path / "params.ini"
    save_params(str(path), default_params())
    with open(path, "a", encoding="utf-8") as f:
        f.write("[extra]\nfoo = 1\n")
    with pytest.raises(ValidationError) as excinfo:
        load_params(str(path))
    assert "extra.foo" in excinfo.value.fields


def test_invalid_params_are_rejected():
    with pytest.raises(ValidationError):
        dataclasses.replace(default_params(), n_clusters=0)


# ---------- 合成不变量 ----------

def test_shadowing_has_exponential_autocorrelation():
    params = dataclasses.replace(default_params(), pl=PathLossFit(60.0, 2.0, 3.0), shadow_decorrelation_m=10.0)
    shadow = shadow_process(params, np.arange(10_000) * 1.0, np.random.default_rng(17))
    z = shadow - shadow.mean()
    lags = np.arange(31)
    acf = np.array([np.mean(z[: z.size - m] * z[m:]) for m in lags]) / np.mean(z * z)
    model = np.exp(-lags / 10.0)
    r_squared = 1.0 - np.sum((acf - model) ** 2) / np.sum((acf - acf.mean()) ** 2)
    assert r_squared > 0.95
    assert np.std(shadow) == pytest.approx(3.0, rel=0.1)


def test_shadowing_needs_uniform_spacing(rng):
    params = dataclasses.replace(default_params(), pl=PathLossFit(60.0, 2.0, 3.0))
    with pytest.raises(DomainError):
        shadow_process(params, [0.0, 1.0, 3.0], rng)
    flat = dataclasses.replace(default_params(), pl=PathLossFit(60.0, 2.0, 0.0))
    np.testing.assert_array_equal(shadow_process(flat, np.arange(5.0), rng), 0.0)


def _single_point_links(params, n_links, rays_per_cluster=DEFAULT_RAYS_PER_CLUSTER):
    traj = TrajectorySpec((200.0, 0.0, 0.0), (1.0, 0.0, 0.0), 50.0, 0.002, 1)
    band = BandSpec(60e9, 1e9, 2)
    gains = []
    for link in range(n_links):
        snap = next(synthesize_snapshots(params, traj, band, seed=99, link_index=link,
                                         rays_per_cluster=rays_per_cluster))
        gains.append(narrowband_gain(snap)["VV"])
    return np.array(gains)


@pytest.mark.slow
def test_synthesized_envelope_is_ricean():
    params = dataclasses.replace(default_params(), pl=PathLossFit(60.0, 2.0, 0.0), k_db=(7.0, 0.0),
                                 ds_log=(-9.0, 0.0))
    envelope = np.abs(_single_point_links(params, 3000, rays_per_cluster=20))
    assert fit_ricean(envelope).k_db == pytest.approx(7.0, abs=0.5)


@pytest.mark.slow
def test_mean_power_follows_path_loss_model():
    params = dataclasses.replace(default_params(), pl=PathLossFit(60.0, 2.0, 0.0))
    power = np.mean(np.abs(_single_point_links(params, 10_000)) ** 2)
    expected_db = -float(params.pl.predict(200.0))
    assert 10.0 * math.log10(power) == pytest.approx(expected_db, abs=0.3)
