# -*- coding: utf-8 -*-
"""
运行配置解析与运行清单测试
"""

import hashlib

import pytest

from railchan.config import BASELINE_F_CENTER, RUN_DEFAULTS
from railchan.errors import ValidationError
from railchan.models.scene import ScenarioSpec
from railchan.services.persistence import dumps_json
from railchan.services.run_config import (
    build_manifest, build_run_config, load_run_config, merge_layers, resolve_flat,
    transmitter_position
)

CONFIG_TEXT = """\
; 测试用配置
[run]
seed = 7
jobs = 2

[scenario]
module = m3
concise = yes

[band]
n_points = 101
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(CONFIG_TEXT, encoding="utf-8")
    return str(path)


def test_defaults_only():
    flat = resolve_flat()
    assert flat == RUN_DEFAULTS
    run = build_run_config(flat)
    assert run.band.f_center == BASELINE_F_CENTER
    assert run.band.spacing == pytest.approx(1e7)
    assert run.noise_floor_dbm == pytest.approx(-67.97, abs=0.01)
    assert (run.tx_height, run.rx_height) == (6.0, 4.5)


def test_file_then_overrides(config_file):
    flat = resolve_flat(config_file, {"run.seed": "11", "band.n_points": None})
    assert flat["run.seed"] == 11
    assert flat["run.jobs"] == 2
    assert flat["scenario.module"] == "m3"
    assert flat["scenario.concise"] is True
    assert flat["band.n_points"] == 101


def test_preset_sits_below_file(config_file):
    flat = resolve_flat(config_file, preset="outdoor90")
    assert flat["band.f_center"] == 93.2e9
    assert flat["scenario.module"] == "m3"
    assert flat["band.n_points"] == 101
    assert flat["run.preset"] == "outdoor90"


def test_preset_named_in_file(tmp_path):
    path = tmp_path / "p.ini"
    path.write_text("[run]\npreset = tunnel30\n", encoding="utf-8")
    run = load_run_config(str(path))
    assert run.scenario.module_kind == "m5"
    assert run.trace.max_reflection_order == 10
    assert run.concise


def test_unknown_key(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[run]\nseeed = 1\n", encoding="utf-8")
    with pytest.raises(ValidationError) as excinfo:
        resolve_flat(str(path))
    assert excinfo.value.fields == ["run.seeed"]


def test_bad_value_types():
    with pytest.raises(ValidationError) as excinfo:
        merge_layers({"run.jobs": "many", "trace.enable_scattering": "maybe", "band.n_points": "2.5"})
    assert excinfo.value.fields == ["band.n_points", "run.jobs", "trace.enable_scattering"]


def test_missing_file_and_unknown_preset(tmp_path):
    with pytest.raises(ValidationError):
        resolve_flat(str(tmp_path / "nope.ini"))
    with pytest.raises(ValidationError) as excinfo:
        resolve_flat(preset="table9")
    assert "run.preset=table9" in excinfo.value.fields


@pytest.mark.parametrize("key, value", [
    ("scenario.module", "m9"),
    ("link.setup", 3),
    ("stats.polarization", "VX"),
    ("run.jobs", 0),
    ("stats.cb_level", 1.0),
])
def test_invalid_values(key, value):
    with pytest.raises(ValidationError) as excinfo:
        build_run_config(merge_layers({key: value}))
    assert key in excinfo.value.fields


def test_low_antenna_setup_and_explicit_heights():
    run = build_run_config(merge_layers({"link.setup": "2"}))
    assert (run.tx_height, run.rx_height) == (1.0, 0.92)
    run = build_run_config(merge_layers({"link.setup": "2", "link.rx_height": "2.5"}))
    assert run.rx_height == 2.5


def test_transmitter_positions():
    assert transmitter_position(ScenarioSpec("m5"), 0.0, 6.0) == (0.0, -5.5, 6.0)
    x, y, z = transmitter_position(ScenarioSpec("m1"), 10.0, 6.0)
    assert (x, y, z) == pytest.approx((10.0, -4.7, 6.0))
    assert transmitter_position(ScenarioSpec("m6"), 0.0, 1.0)[2] == pytest.approx(13.0)


def test_trajectory_direction():
    run = build_run_config(merge_layers({"trajectory.samples": 5}))
    assert run.trajectory.direction == (1.0, 0.0, 0.0)
    assert run.trajectory.start == (10.0, -2.5, 4.5)
    run = build_run_config(merge_layers({"trajectory.towards_tx": "true"}))
    assert run.trajectory.direction == (-1.0, 0.0, 0.0)


def test_manifest_is_stable(tmp_path):
    (tmp_path / "a.csv").write_text("x\n1\n", encoding="utf-8")
    run = build_run_config(merge_layers({"run.seed": 3}))
    first = build_manifest(run, "trace", ["a.csv"], str(tmp_path), exclude=("run.out",))
    second = build_manifest(run, "trace", ["a.csv"], str(tmp_path), exclude=("run.out",))
    assert first == second
    assert "run.out" not in first["config"]
    assert first["config_sha256"] == hashlib.sha256(dumps_json(first["config"]).encode("utf-8")).hexdigest()
    assert first["outputs"]["a.csv"] == hashlib.sha256(b"x\n1\n").hexdigest()
    assert first["seed"] == 3
    assert set(first["versions"]) == {"railchan", "numpy", "scipy", "pandas"}
