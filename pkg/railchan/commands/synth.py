# -*- coding: utf-8 -*-
"""
synth 子命令
按随机模型参数合成 CTF；--roundtrip N 做拟合→合成→再拟合闭环检查
"""

import logging

import pandas as pd

from railchan.commands.common import (
    out_path, output_dir, run_config_from_args, write_frame, write_manifest
)
from railchan.errors import ValidationError
from railchan.services.channel import assemble_ctf
from railchan.services.persistence import atomic_write_json, write_ctf_file
from railchan.services.stochgen import (
    default_params, load_params, params_to_flat, synthesize_snapshots, validate_roundtrip
)

logger = logging.getLogger(__name__)


def synthesize_links(run, params, n_links):
    """n_links 条链路依次合成，返回 (CTF 列表, 索引表)"""
    ctfs, rows = [], []
    rays = run.value("stochastic.rays_per_cluster")
    for link in range(n_links):
        for snap in synthesize_snapshots(params, run.trajectory, run.band, run.seed, link, run.tx, rays):
            ctfs.append(assemble_ctf(snap, run.band))
            rows.append((link, snap.index, snap.rx_position[0], snap.time_s))
    frame = pd.DataFrame(rows, columns=["link", "snapshot_id", "position_m", "time_s"])
    return ctfs, frame


def roundtrip_report(report):
    return {
        "n_links": report.n_links,
        "seed": report.seed,
        "wide_confidence": report.wide_confidence,
        "deltas": report.deltas,
        "confidence_half_width": report.confidence,
        "fitted": params_to_flat(report.fitted),
    }


def handle(args):
    run = run_config_from_args(args)
    output_dir(run)
    params = load_params(args.params) if args.params else default_params()
    outputs = []

    if args.roundtrip is not None:
        if args.roundtrip < 2:
            raise ValidationError("闭环链路数至少为 2", ["--roundtrip"])
        report = validate_roundtrip(params, args.roundtrip, run.seed,
                                    rays_per_cluster=run.value("stochastic.rays_per_cluster"))
        atomic_write_json(out_path(run, "roundtrip.json"), roundtrip_report(report))
        outputs.append("roundtrip.json")
    else:
        n_links = run.value("stochastic.n_links")
        ctfs, frame = synthesize_links(run, params, n_links)
        write_ctf_file(out_path(run, "synth_ctf.bin"), ctfs, run.band)
        outputs.append("synth_ctf.bin")
        write_frame(run, "synth_index.csv", frame, outputs)
        logger.info("[合成] %d 条链路，共 %d 个 CTF", n_links, len(ctfs))

    write_manifest(run, "synth", outputs)
    return 0


def register(subparsers, common):
    parser = subparsers.add_parser("synth", parents=[common], help="随机信道合成")
    parser.add_argument("--params", help="参数文件 params.ini（默认使用内置典型参数）")
    parser.add_argument("--roundtrip", type=int, help="闭环验证的链路数")
    parser.set_defaults(handler=handle)
    return parser
