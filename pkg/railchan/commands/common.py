# -*- coding: utf-8 -*-
"""
子命令公共部分
通用参数、配置解析、场景准备、快照读写与运行清单
"""

import argparse
import logging
import os

import numpy as np
import pandas as pd

from railchan.config import MODULE_KINDS
from railchan.errors import ValidationError
from railchan.services.materials import load_materials_file, material_table
from railchan.services.persistence import (
    atomic_write_json, read_csv, read_ctf_file, snapshots_from_frames, write_csv
)
from railchan.services.run_config import build_manifest, load_run_config
from railchan.services.scene_builder import build_module
from railchan.services.scene_reduce import reduce_scene

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"

# 命令行参数 → 点号配置键
FLAG_KEYS = {
    "seed": "run.seed",
    "jobs": "run.jobs",
    "out": "run.out",
    "preset": "run.preset",
    "setup": "link.setup",
    "module": "scenario.module",
    "concise": "scenario.concise",
    "length": "scenario.length",
    "barrier_height": "scenario.barrier_height",
    "order": "trace.max_reflection_order",
    "fc": "band.f_center",
    "bw": "band.bandwidth",
    "points": "band.n_points",
    "cb_level": "stats.cb_level",
    "speed_kmh": "trajectory.speed_kmh",
    "interval_mm": "trajectory.interval_mm",
    "samples": "trajectory.samples",
}
# 不影响结果的执行参数，不写入清单
EXECUTION_KEYS = ("run.jobs", "run.out")


def common_parser():
    """所有子命令共享的参数"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="运行配置文件 (INI)")
    parser.add_argument("--preset", help="预设: baseline / outdoor90 / tunnel30")
    parser.add_argument("--jobs", type=int, help="并行线程数")
    parser.add_argument("--seed", type=int, help="随机种子")
    parser.add_argument("--out", help="输出目录")
    parser.add_argument("--setup", type=int, choices=(1, 2), help="天线高度预设")
    parser.add_argument("--module", choices=MODULE_KINDS, help="场景模块")
    parser.add_argument("--concise", action="store_true", default=None, help="使用精简场景")
    parser.add_argument("--order", type=int, help="最大反射阶数")
    parser.add_argument("--fc", type=float, help="中心频率 (Hz)")
    parser.add_argument("--bw", type=float, help="带宽 (Hz)")
    parser.add_argument("--points", type=int, help="频点数")
    parser.add_argument("--cb-level", type=float, help="相干带宽门限")
    parser.add_argument("--speed-kmh", type=float, help="列车速度 (km/h)")
    parser.add_argument("--interval-mm", type=float, help="采样间隔 (mm)")
    parser.add_argument("--samples", type=int, help="采样点数")
    return parser


def overrides_from_args(args):
    return {key: getattr(args, attr, None) for attr, key in FLAG_KEYS.items()}


def run_config_from_args(args):
    return load_run_config(args.config, overrides_from_args(args))


def output_dir(run):
    os.makedirs(run.out_dir, exist_ok=True)
    return run.out_dir


def out_path(run, name):
    return os.path.join(run.out_dir, name)


def materials_for(run):
    if run.materials_file:
        return load_materials_file(run.materials_file)
    flat = run.flat
    return material_table(flat["materials.scatter_s"], flat["materials.scatter_alpha"],
                          flat["materials.veg_atten_db_m"])


def prepare_scene(run, concise=None):
    """按配置构造场景，需要时生成精简版"""
    scene = build_module(run.scenario, materials_for(run))
    if run.concise if concise is None else concise:
        scene = reduce_scene(scene, run.tx_height, run.rx_height)
    return scene


def write_manifest(run, command, outputs):
    """写出运行清单（不含时间戳，保证重跑字节一致）"""
    manifest = build_manifest(run, command, outputs, run.out_dir, exclude=EXECUTION_KEYS)
    atomic_write_json(out_path(run, MANIFEST_FILE), manifest)
    logger.info("[清单] %s: %d 个输出文件", command, len(outputs))


def require_inputs(run, *names):
    """检查前序输出是否存在，缺失时报出文件名"""
    missing = [out_path(run, n) for n in names if not os.path.exists(out_path(run, n))]
    if missing:
        raise ValidationError("缺少输入文件", missing)


def load_snapshots(run):
    require_inputs(run, "snapshots.csv", "paths.csv")
    return snapshots_from_frames(read_csv(out_path(run, "snapshots.csv")), read_csv(out_path(run, "paths.csv")))


def load_ctfs(run):
    require_inputs(run, "ctf.bin")
    return read_ctf_file(out_path(run, "ctf.bin"))


def positions_and_distances(run, snapshots):
    """每个快照的沿线位置 (m) 与收发距离 (m)"""
    rx = np.array([s.rx_position for s in snapshots], dtype=float).reshape(-1, 3)
    tx = np.asarray(run.tx, dtype=float)
    return rx[:, 0], np.linalg.norm(rx - tx, axis=1)


def write_frame(run, name, frame, outputs):
    write_csv(out_path(run, name), pd.DataFrame(frame) if not isinstance(frame, pd.DataFrame) else frame)
    outputs.append(name)
