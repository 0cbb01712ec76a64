# -*- coding: utf-8 -*-
"""
sweep 子命令
沿轨迹逐点追踪，写出快照表、路径表和 CTF 文件
"""

import logging

from railchan.commands.common import (
    out_path, output_dir, prepare_scene, run_config_from_args, write_frame, write_manifest
)
from railchan.services.channel import assemble_ctf, sweep
from railchan.services.persistence import paths_frame, snapshots_frame, write_ctf_file

logger = logging.getLogger(__name__)


def run_sweep(run):
    """执行扫描并写出结果，返回输出文件名列表"""
    output_dir(run)
    scene = prepare_scene(run)
    snapshots = list(sweep(scene, run.tx, run.trajectory, run.trace, seed=run.seed, jobs=run.jobs))
    flagged = sum(1 for s in snapshots if s.flagged)
    logger.info("[扫描] %d 个快照，其中 %d 个标记为越界", len(snapshots), flagged)

    outputs = []
    write_frame(run, "snapshots.csv", snapshots_frame(snapshots), outputs)
    write_frame(run, "paths.csv", paths_frame(snapshots), outputs)
    write_ctf_file(out_path(run, "ctf.bin"), [assemble_ctf(s, run.band) for s in snapshots], run.band)
    outputs.append("ctf.bin")
    return outputs


def handle(args):
    run = run_config_from_args(args)
    write_manifest(run, "sweep", run_sweep(run))
    return 0


def register(subparsers, common):
    parser = subparsers.add_parser("sweep", parents=[common], help="轨迹扫描")
    parser.set_defaults(handler=handle)
    return parser
