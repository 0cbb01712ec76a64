# -*- coding: utf-8 -*-
"""
trace 子命令
单个接收位置的全部传播路径
"""

import logging

import numpy as np

from railchan.commands.common import (
    out_path, output_dir, prepare_scene, run_config_from_args, write_frame, write_manifest
)
from railchan.errors import ValidationError
from railchan.models.channel import ChannelSnapshot
from railchan.services.channel import assemble_ctf
from railchan.services.persistence import atomic_write_json, paths_frame, snapshots_frame
from railchan.services.stats import link_stats, mechanism_contribution
from railchan.services.tracer import TraceContext, snapshot_rng, trace_batch

logger = logging.getLogger(__name__)


def _parse_point(text):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        values = []
    if len(values) != 3:
        raise ValidationError("坐标格式应为 x,y,z", ["--rx"])
    return np.array(values)


def handle(args):
    run = run_config_from_args(args)
    output_dir(run)
    scene = prepare_scene(run)
    rx = _parse_point(args.rx) if args.rx else np.asarray(run.trajectory.start, dtype=float)
    if not scene.contains(rx):
        logger.warning("[追踪] 接收点 %s 位于场景包围盒外", rx.tolist())

    ctx = TraceContext(scene, run.trace)
    paths = trace_batch(ctx, run.tx, rx[None, :], [snapshot_rng(run.seed, 0)])[0]
    snap = ChannelSnapshot(0, tuple(map(float, rx)), 0.0, tuple(paths), not scene.contains(rx))

    outputs = []
    write_frame(run, "snapshots.csv", snapshots_frame([snap]), outputs)
    write_frame(run, "paths.csv", paths_frame([snap]), outputs)
    summary = {
        "tx": list(run.tx),
        "rx": rx.tolist(),
        "n_paths": len(paths),
        "mechanisms": mechanism_contribution([snap]),
    }
    if paths:
        summary["link_stats"] = link_stats(snap, assemble_ctf(snap, run.band), run.cb_level,
                                           run.polarization).as_dict()
    atomic_write_json(out_path(run, "trace_summary.json"), summary)
    outputs.append("trace_summary.json")
    write_manifest(run, "trace", outputs)
    logger.info("[追踪] 共 %d 条路径", len(paths))
    return 0


def register(subparsers, common):
    parser = subparsers.add_parser("trace", parents=[common], help="单点追踪")
    parser.add_argument("--rx", help="接收点坐标 x,y,z（默认轨迹起点）")
    parser.set_defaults(handler=handle)
    return parser
