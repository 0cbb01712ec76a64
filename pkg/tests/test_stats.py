# -*- coding: utf-8 -*-
"""
信道统计量测试
"""

import math

import numpy as np
import pytest

from builders import make_path, reflection
from railchan.errors import DomainError, EstimationError, FitError
from railchan.models.channel import BandSpec, ChannelSnapshot, Interaction
from railchan.services.channel import assemble_ctf
from railchan.services.stats import (
    angular_spread, coherence_bandwidth, compare_traces, fit_path_loss, fit_ricean, k_factor_moment,
    k_factor_rays, link_stats, mechanism_contribution, noise_floor, path_loss_db, rms_delay_spread,
    snr_trace, weighted_spread
)


def ricean_envelope(rng, k_db, n, omega=1.0):
    k = 10.0 ** (k_db / 10.0)
    los = math.sqrt(k * omega / (k + 1.0))
    sigma = math.sqrt(omega / (2.0 * (k + 1.0)))
    return np.abs(los + sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n)))


def rayleigh_envelope(rng, n):
    return np.abs(rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)


# ---------- 时延域 ----------

def test_delay_spread_two_equal_taps():
    assert rms_delay_spread(([0.0, 100e-9], [1.0, 1.0])) == pytest.approx(50e-9)


def test_delay_spread_three_taps_and_offset_invariance():
    delays = np.array([0.0, 50e-9, 100e-9])
    powers = np.ones(3)
    expected = math.sqrt(5000.0 / 3.0) * 1e-9
    assert rms_delay_spread((delays, powers)) == pytest.approx(expected, rel=1e-9)
    assert rms_delay_spread((delays + 3e-6, powers)) == pytest.approx(expected, rel=1e-6)


def test_delay_spread_of_empty_profile():
    with pytest.raises(DomainError):
        rms_delay_spread(([0.0, 1e-9], [0.0, 0.0]))


def _two_path_column(delta_tau):
    band = BandSpec(60e9, 400e6, 4001)
    ctf = assemble_ctf([make_path(0.0), make_path(delta_tau)], band)
    return ctf.column("VV"), band.spacing


def test_coherence_bandwidth_two_paths():
    column, spacing = _two_path_column(100e-9)
    assert coherence_bandwidth(column, spacing) == pytest.approx(1.0 / (3 * 100e-9), abs=1e5)


def test_coherence_bandwidth_shrinks_with_delay_separation():
    values = [coherence_bandwidth(*_two_path_column(dt)) for dt in (50e-9, 100e-9, 200e-9)]
    assert values[0] > values[1] > values[2]


def test_coherence_bandwidth_flat_channel_is_full_band():
    band = BandSpec(60e9, 400e6, 401)
    column = assemble_ctf([make_path(10e-9)], band).column("VV")
    assert coherence_bandwidth(column, band.spacing) == pytest.approx(400e6)


def test_coherence_bandwidth_rejects_bad_level():
    column, spacing = _two_path_column(100e-9)
    with pytest.raises(DomainError):
        coherence_bandwidth(column, spacing, level=1.5)


# ---------- K 因子 ----------

def test_ray_k_factor():
    paths = [make_path(1e-7, amplitude=math.sqrt(10.0)),
             make_path(2e-7, chain=[reflection(0)])]
    assert k_factor_rays(paths) == pytest.approx(10.0)


def test_ray_k_factor_edge_cases():
    los = make_path(1e-7)
    refl = make_path(2e-7, chain=[reflection(0)])
    assert k_factor_rays([los]) == math.inf
    assert k_factor_rays([refl]) == -math.inf
    with pytest.raises(DomainError):
        k_factor_rays([])


def test_moment_k_recovers_ricean(rng):
    assert k_factor_moment(ricean_envelope(rng, 5.0, 100_000)) == pytest.approx(5.0, abs=0.5)


def test_moment_k_of_rayleigh_is_small():
    env = rayleigh_envelope(np.random.default_rng(7), 4_000_000)
    assert k_factor_moment(env) <= -10.0


def test_moment_k_needs_samples():
    with pytest.raises(EstimationError):
        k_factor_moment(np.ones(99))


@pytest.mark.slow
@pytest.mark.parametrize("k_db", [3.0, 7.0, 10.0])
def test_ricean_fit_recovers_k(rng, k_db):
    fit = fit_ricean(ricean_envelope(rng, k_db, 100_000))
    assert fit.k_db == pytest.approx(k_db, abs=0.5)
    assert fit.omega == pytest.approx(1.0, rel=0.02)
    assert fit.goodness < 0.01
    assert not fit.degenerate


def test_ricean_fit_of_rayleigh(rng):
    fit = fit_ricean(rayleigh_envelope(rng, 400_000))
    assert fit.k_linear < 0.25
    assert fit.goodness < 0.03


def test_ricean_fit_constant_envelope_hits_cap():
    fit = fit_ricean(np.full(2000, 0.3))
    assert fit.degenerate
    assert fit.k_db == pytest.approx(30.0)


def test_ricean_fit_input_checks():
    with pytest.raises(EstimationError):
        fit_ricean(np.ones(999))
    env = np.ones(1000)
    env[10] = -1.0
    with pytest.raises(DomainError):
        fit_ricean(env)


# ---------- 角度域 ----------

def test_azimuth_spread_symmetric_pair():
    paths = [make_path(1e-7, aoa=(30.0, 0.0)), make_path(2e-7, aoa=(-30.0, 0.0))]
    assert angular_spread(paths, "ASA") == pytest.approx(30.0)


def test_azimuth_spread_wraps_around():
    paths = [make_path(1e-7, aoa=(170.0, 0.0)), make_path(2e-7, aoa=(-170.0, 0.0))]
    assert angular_spread(paths, "ASA") == pytest.approx(10.0)


def test_azimuth_spread_is_rotation_invariant(rng):
    angles = rng.uniform(-180, 180, 8)
    powers = rng.uniform(0.1, 1.0, 8)
    base = weighted_spread(angles, powers, circular=True)
    rotated = (angles + 77.0 + 180.0) % 360.0 - 180.0
    assert weighted_spread(rotated, powers, circular=True) == pytest.approx(base, rel=1e-9)


def test_elevation_spread_is_linear():
    paths = [make_path(1e-7, aod=(0.0, 10.0)), make_path(2e-7, aod=(0.0, -10.0))]
    assert angular_spread(paths, "ESD") == pytest.approx(10.0)
    with pytest.raises(DomainError):
        angular_spread(paths, "XSA")


# ---------- 路径损耗 ----------

def test_path_loss_fit_exact():
    d = np.logspace(0, 3, 20)
    fit = fit_path_loss(zip(d, 40.0 + 20.0 * np.log10(d)))
    assert fit.pl0_db == pytest.approx(40.0)
    assert fit.n == pytest.approx(2.0)
    assert fit.sigma_sf_db == pytest.approx(0.0, abs=1e-9)
    assert fit.predict(100.0) == pytest.approx(80.0)


def test_path_loss_fit_noisy(rng):
    d = rng.uniform(10, 1000, 5000)
    pl = 60.0 + 27.0 * np.log10(d) + rng.normal(0, 4.0, d.size)
    fit = fit_path_loss(zip(d, pl))
    assert fit.n == pytest.approx(2.7, abs=0.05)
    assert fit.sigma_sf_db == pytest.approx(4.0, abs=0.2)


@pytest.mark.parametrize("samples", [[(10.0, 80.0), (10.0, 81.0)], [(-1.0, 80.0), (10.0, 81.0)]])
def test_path_loss_fit_errors(samples):
    with pytest.raises(FitError):
        fit_path_loss(samples)


def test_path_loss_fit_reports_dropped_samples(caplog):
    d = np.array([10.0, 20.0, 40.0, 80.0, 160.0])
    pl = 40.0 + 20.0 * np.log10(d)
    samples = list(zip(d, pl)) + [(30.0, math.inf), (50.0, math.nan)]
    with caplog.at_level("WARNING", logger="railchan.services.stats"):
        fit = fit_path_loss(samples)
    assert fit.n == pytest.approx(2.0)
    assert "[路径损耗] 丢弃 2 个非有限样本" in caplog.text


def test_path_loss_of_paths():
    assert path_loss_db([make_path(1e-7, amplitude=0.01)]) == pytest.approx(40.0)
    assert path_loss_db([]) == math.inf


# ---------- SNR ----------

def test_noise_floor():
    assert noise_floor(8e9, 7.0) == pytest.approx(-67.97, abs=0.01)
    with pytest.raises(DomainError):
        noise_floor(0.0)


def test_snr_trace():
    np.testing.assert_allclose(snr_trace([100.0, 110.0], 10.0, -70.0), [-20.0, -30.0])


def test_compare_identical_and_offset():
    pos = np.linspace(0, 100, 201)
    model = np.column_stack([pos, 20.0 - 0.1 * pos])
    same = compare_traces(model, model)
    assert same["mean_error_db"] == pytest.approx(0.0, abs=1e-12)
    assert same["std_error_db"] == pytest.approx(0.0, abs=1e-12)
    assert same["n_points"] == 201
    shifted = compare_traces(model, np.column_stack([pos, model[:, 1] + 2.0]))
    assert shifted["mean_error_db"] == pytest.approx(2.0)
    assert shifted["std_error_db"] == pytest.approx(0.0, abs=1e-12)


def test_compare_noisy_measurement(rng):
    pos = np.linspace(0, 1000, 10_001)
    model = np.column_stack([pos, np.zeros_like(pos)])
    measured = np.column_stack([pos, rng.normal(0.0, 4.0, pos.size)])
    result = compare_traces(model, measured)
    assert result["std_error_db"] == pytest.approx(4.0, abs=0.15)
    assert abs(result["mean_error_db"]) < 0.2


def test_compare_uses_overlap_only():
    model = [(float(x), 0.0) for x in range(0, 11)]
    measured = [(4.0, 1.0), (8.0, 1.0)]
    assert compare_traces(model, measured)["n_points"] == 5
    with pytest.raises(DomainError):
        compare_traces(model, [(50.0, 1.0), (60.0, 1.0)])


# ---------- 汇总 ----------

def test_link_stats_of_two_paths():
    paths = [make_path(100e-9, amplitude=math.sqrt(10.0) * 1e-3, aoa=(0.0, 0.0), aod=(180.0, 0.0)),
             make_path(200e-9, amplitude=1e-3, aoa=(20.0, 5.0), aod=(160.0, -5.0), chain=[reflection(3)])]
    ctf = assemble_ctf(paths, BandSpec(60e9, 400e6, 401))
    stats = link_stats(ChannelSnapshot(0, (0.0, 0.0, 0.0), 0.0, tuple(paths)), ctf)
    assert stats.k_factor_db == pytest.approx(10.0)
    assert stats.path_loss_db == pytest.approx(-10 * math.log10(11e-6))
    assert stats.rms_delay_spread_s == pytest.approx(100e-9 * math.sqrt(10.0) / 11.0)
    assert stats.coherence_bw_hz > 0
    assert 0 < stats.asa_deg < 20.0
    assert stats.spread("ESD") > 0


def test_link_stats_without_paths():
    stats = link_stats([])
    assert stats.path_loss_db == math.inf
    assert math.isnan(stats.coherence_bw_hz)


def test_mechanism_shares_sum_to_one():
    point = (0.0, 0.0, 0.0)
    paths = [
        make_path(1e-7, amplitude=1.0),
        make_path(2e-7, amplitude=0.5, chain=[reflection(1)]),
        make_path(3e-7, amplitude=0.3, chain=[reflection(1), reflection(2)]),
        make_path(4e-7, amplitude=0.2, chain=[Interaction("diffraction", 0, point)]),
        make_path(5e-7, amplitude=0.1, chain=[Interaction("scattering", 4, point, 7)]),
    ]
    shares = mechanism_contribution([paths, paths[:2]])
    assert list(shares) == ["los", "reflection_1", "reflection_2", "diffraction", "scattering"]
    assert sum(shares.values()) == pytest.approx(1.0)
    assert shares["los"] > shares["reflection_1"] > shares["scattering"]
