# -*- coding: utf-8 -*-
"""
场景级回归：隧道波导效应、低天线高度下的俯仰角扩展
"""

import numpy as np
import pytest

from railchan.commands.common import prepare_scene
from railchan.services.channel import sweep
from railchan.services.run_config import build_run_config, merge_layers
from railchan.services.stats import fit_path_loss, link_stats, path_loss_db


def _sweep(overrides):
    run = build_run_config(merge_layers(overrides))
    scene = prepare_scene(run)
    return run, list(sweep(scene, run.tx, run.trajectory, run.trace, seed=run.seed, jobs=4))


@pytest.mark.slow
def test_tunnel_path_loss_exponent_below_free_space():
    run, snapshots = _sweep({
        "scenario.module": "m5",
        "scenario.length": 500,
        "scenario.concise": True,
        "trace.max_reflection_order": 6,
        "trace.enable_diffraction": False,
        "trace.enable_scattering": False,
        "band.f_center": 30e9,
        "band.bandwidth": 500e6,
        "band.n_points": 101,
        "trajectory.samples": 200,
        "trajectory.interval_mm": 2000,
    })
    assert not any(s.flagged for s in snapshots)
    tx = np.asarray(run.tx)
    samples = [(float(np.linalg.norm(np.asarray(s.rx_position) - tx)), path_loss_db(s.paths))
               for s in snapshots]
    fit = fit_path_loss(samples)
    assert 0.0 < fit.n < 2.0


@pytest.mark.slow
def test_low_antennas_in_cutting_have_small_elevation_spread():
    _, snapshots = _sweep({
        "scenario.module": "m3",
        "scenario.length": 200,
        "link.setup": 2,
        "trace.max_reflection_order": 2,
        "trace.enable_diffraction": False,
        "trace.enable_scattering": False,
        "trajectory.samples": 50,
        "trajectory.interval_mm": 2000,
    })
    stats = [link_stats(s) for s in snapshots if s.paths]
    assert stats
    median = {kind: float(np.median([st.spread(kind) for st in stats]))
              for kind in ("ASA", "ASD", "ESA", "ESD")}
    assert median["ESA"] <= 15.0
    assert median["ESD"] <= 15.0
    assert median["ASA"] >= median["ESA"]
    assert median["ASD"] >= median["ESD"]
