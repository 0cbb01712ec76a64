# -*- coding: utf-8 -*-
"""
运行配置解析
默认值 ← 预设 ← 配置文件 ← 命令行参数，逐层覆盖；未知键报错
"""

import hashlib
import logging
import math
import os

import numpy as np
import pandas as pd
import scipy

from railchan.config import (
    ANTENNA_SETUPS, MODULE_KINDS, OPTIONAL_FLOAT_KEYS, POLARIZATIONS, RUN_DEFAULTS, STUDY_PRESETS,
    TUNNEL_TX_WALL_GAP, TX_CLEARANCE, VERSION
)
from railchan.errors import ValidationError
from railchan.models.channel import BandSpec, TraceConfig, TrajectorySpec
from railchan.models.run import RunConfig
from railchan.models.scene import ScenarioSpec
from railchan.services.persistence import dumps_json
from railchan.services.stats import noise_floor
from railchan.utils.settings import read_flat_config

logger = logging.getLogger(__name__)

_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


def _parse_bool(text):
    low = str(text).strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"不是布尔值: {text}")


def coerce_value(key, value):
    """按默认值类型转换单个配置值"""
    default = RUN_DEFAULTS[key]
    if key in OPTIONAL_FLOAT_KEYS:
        if value is None or str(value).strip() == "":
            return ""
        return float(value)
    if key == "scenario.include_train":
        if value is None or str(value).strip() == "":
            return ""
        return value if isinstance(value, bool) else _parse_bool(value)
    if isinstance(default, bool):
        return value if isinstance(value, bool) else _parse_bool(value)
    if isinstance(default, int):
        number = float(value)
        if number != int(number):
            raise ValueError(f"不是整数: {value}")
        return int(number)
    if isinstance(default, float):
        return float(value)
    return str(value)


def merge_layers(*layers):
    """
    逐层合并点号键配置

    返回:
        dict: 类型转换后的完整配置（包含全部默认值）
    """
    unknown = sorted({k for layer in layers for k in layer if k not in RUN_DEFAULTS})
    if unknown:
        raise ValidationError("配置包含未知键", unknown)
    flat = dict(RUN_DEFAULTS)
    bad = []
    for layer in layers:
        for key, value in layer.items():
            if value is None:
                continue
            try:
                flat[key] = coerce_value(key, value)
            except (TypeError, ValueError):
                bad.append(key)
    if bad:
        raise ValidationError("配置值类型错误", sorted(set(bad)))
    return flat


def resolve_flat(config_path=None, overrides=None, preset=None):
    """
    默认值 ← 预设 ← 配置文件 ← 命令行覆盖

    预设名可来自参数或配置文件中的 run.preset
    """
    if config_path and not os.path.isfile(config_path):
        raise ValidationError("配置文件不存在", [str(config_path)])
    file_flat = read_flat_config(config_path) if config_path else {}
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    name = preset or overrides.get("run.preset") or file_flat.get("run.preset") or ""
    if name and name not in STUDY_PRESETS:
        raise ValidationError("未知预设", [f"run.preset={name}"])
    preset_flat = dict(STUDY_PRESETS.get(name, {}))
    if name:
        preset_flat["run.preset"] = name
    return merge_layers(preset_flat, file_flat, overrides)


def _scenario_from_flat(flat):
    kwargs = {"module_kind": flat["scenario.module"]}
    for key in ("length", "tunnel_shape", "arch_segments", "tunnel_width", "tunnel_height",
                "barrier_height", "corridor_width", "track_spacing"):
        kwargs[key] = flat[f"scenario.{key}"]
    if flat["scenario.include_train"] != "":
        kwargs["include_train"] = flat["scenario.include_train"]
    return ScenarioSpec(**kwargs)


def transmitter_position(scenario, tx_x, tx_height):
    """
    发射机位置：隧道内贴左侧壁，露天场景位于左侧立柱的线路一侧
    """
    if scenario.is_tunnel:
        y = -scenario.tunnel_width / 2 + TUNNEL_TX_WALL_GAP
    else:
        y = -scenario.pylon_offset + scenario.pylon_width / 2 + TX_CLEARANCE
    return (float(tx_x), float(y), float(scenario.base_z + tx_height))


def trajectory_from_flat(flat, scenario, rx_height):
    """接收端轨迹：沿第一条轨道中心线，远离（或驶向）发射机"""
    start_x = flat["trajectory.start_x"]
    tx_x = flat["link.tx_x"]
    away = 1.0 if start_x >= tx_x else -1.0
    direction = -away if flat["trajectory.towards_tx"] else away
    start = (float(start_x), float(scenario.track_centers[0]), float(scenario.base_z + rx_height))
    return TrajectorySpec(
        start=start,
        direction=(direction, 0.0, 0.0),
        speed=flat["trajectory.speed_kmh"] / 3.6,
        sample_interval=flat["trajectory.interval_mm"] * 1e-3,
        n_samples=flat["trajectory.samples"],
    )


def build_run_config(flat):
    """
    由完整点号键配置构造 RunConfig

    参数:
        flat: merge_layers / resolve_flat 的结果
    """
    bad = []
    if flat["scenario.module"] not in MODULE_KINDS:
        bad.append("scenario.module")
    if flat["link.setup"] not in ANTENNA_SETUPS:
        bad.append("link.setup")
    if flat["stats.polarization"] not in POLARIZATIONS:
        bad.append("stats.polarization")
    if flat["run.jobs"] < 1:
        bad.append("run.jobs")
    if flat["run.seed"] < 0:
        bad.append("run.seed")
    if bad:
        raise ValidationError("配置值非法", bad)

    setup_tx, setup_rx = ANTENNA_SETUPS[flat["link.setup"]]
    tx_height = setup_tx if flat["link.tx_height"] == "" else flat["link.tx_height"]
    rx_height = setup_rx if flat["link.rx_height"] == "" else flat["link.rx_height"]

    scenario = _scenario_from_flat(flat)
    band = BandSpec(flat["band.f_center"], flat["band.bandwidth"], flat["band.n_points"])
    trace = TraceConfig(
        max_reflection_order=flat["trace.max_reflection_order"],
        enable_diffraction=flat["trace.enable_diffraction"],
        enable_scattering=flat["trace.enable_scattering"],
        enable_vegetation=flat["trace.enable_vegetation"],
        scatter_tile_size=flat["trace.scatter_tile_size"],
        center_frequency=band.f_center,
        min_path_gain_db=flat["trace.min_path_gain_db"],
    )
    nf = flat["link.noise_floor_dbm"]
    if nf == "":
        nf = noise_floor(band.bandwidth, flat["link.noise_figure_db"])
    if not 0.0 < flat["stats.cb_level"] < 1.0:
        raise ValidationError("配置值非法", ["stats.cb_level"])

    return RunConfig(
        scenario=scenario,
        concise=flat["scenario.concise"],
        trace=trace,
        band=band,
        trajectory=trajectory_from_flat(flat, scenario, rx_height),
        tx=transmitter_position(scenario, flat["link.tx_x"], tx_height),
        setup=flat["link.setup"],
        tx_height=float(tx_height),
        rx_height=float(rx_height),
        tx_power_dbm=flat["link.tx_power_dbm"],
        noise_floor_dbm=float(nf),
        cb_level=flat["stats.cb_level"],
        polarization=flat["stats.polarization"],
        seed=flat["run.seed"],
        jobs=flat["run.jobs"],
        out_dir=flat["run.out"],
        materials_file=flat["scenario.materials_file"] or None,
        flat=dict(flat),
    )


def load_run_config(config_path=None, overrides=None, preset=None):
    """读取并解析运行配置"""
    flat = resolve_flat(config_path, overrides, preset)
    logger.debug("[配置] 已解析 %d 个配置键", len(flat))
    return build_run_config(flat)


def _sha256_file(path):
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def build_manifest(run, command, outputs, out_dir, exclude=()):
    """
    运行清单：完整配置、配置哈希、库版本、种子与输出文件哈希（不含时间戳）

    参数:
        run: RunConfig
        command: 子命令名
        outputs: 输出文件名列表（相对 out_dir）
        exclude: 不写入清单的配置键
    """
    config = {k: (None if isinstance(v, float) and not math.isfinite(v) else v)
              for k, v in run.flat.items() if k not in exclude}
    return {
        "command": command,
        "config": config,
        "config_sha256": hashlib.sha256(dumps_json(config).encode('utf-8')).hexdigest(),
        "seed": run.seed,
        "versions": {
            "railchan": VERSION,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
        },
        "outputs": {name: _sha256_file(os.path.join(out_dir, name)) for name in sorted(outputs)},
    }
