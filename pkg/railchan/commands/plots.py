# -*- coding: utf-8 -*-
"""
plots 子命令
输出作图用数据表（不依赖绘图库）：PDP 热图、角度扩展、大尺度衰落、小尺度分布、SNR 曲线
"""

import logging

import numpy as np
import pandas as pd

from railchan.commands.common import (
    load_ctfs, load_snapshots, out_path, positions_and_distances, require_inputs,
    run_config_from_args, write_frame, write_manifest
)
from railchan.errors import DomainError, FitError
from railchan.services.channel import ctf_to_cir, narrowband_gain, pdp
from railchan.services.fading import separate_fading
from railchan.services.persistence import read_csv
from railchan.services.stats import fit_path_loss

logger = logging.getLogger(__name__)

PDF_BINS = 50


def pdp_heat_table(ctfs, positions, snapshots, pol):
    """每个快照一行：归一化 PDP (dB)"""
    rows = []
    for snap, ctf, pos in zip(snapshots, ctfs, positions):
        profile = pdp(ctf_to_cir(ctf), pol)
        with np.errstate(divide='ignore'):
            db = 10.0 * np.log10(profile.powers)
        rows.append([snap.index, pos, ctf.delay_origin] + db.tolist())
    n = len(ctfs[0].H) if ctfs else 0
    columns = ["snapshot_id", "position_m", "delay_origin_s"] + [f"pdp_db_{i}" for i in range(n)]
    return pd.DataFrame(rows, columns=columns)


def large_scale_table(stats):
    frame = pd.DataFrame({"distance_m": stats["distance_m"], "path_loss_db": stats["path_loss_db"]})
    try:
        fit = fit_path_loss(zip(frame["distance_m"], frame["path_loss_db"]))
        frame["fit_db"] = fit.predict(frame["distance_m"].to_numpy(dtype=float))
    except FitError as e:
        frame["fit_db"] = np.nan
        logger.warning("[作图] 路径损耗拟合跳过: %s", e)
    return frame


def small_scale_pdf_table(small_scale, bins=PDF_BINS):
    density, edges = np.histogram(small_scale, bins=bins, density=True)
    return pd.DataFrame({"bin_left": edges[:-1], "bin_right": edges[1:], "density": density})


def emit_plot_tables(run):
    """
    由前序输出生成全部作图数据表

    返回:
        list[str]: 输出文件名
    """
    require_inputs(run, "stats.csv", "snr.csv")
    snapshots = load_snapshots(run)
    ctfs = load_ctfs(run)
    stats = read_csv(out_path(run, "stats.csv"))
    positions, _ = positions_and_distances(run, snapshots)
    outputs = []

    write_frame(run, "pdp_heat.csv", pdp_heat_table(ctfs, positions, snapshots, run.polarization), outputs)
    write_frame(run, "angular_spread.csv",
                stats[["position_m", "asa_deg", "asd_deg", "esa_deg", "esd_deg"]], outputs)
    write_frame(run, "large_scale.csv", large_scale_table(stats), outputs)
    write_frame(run, "snr_trace.csv", read_csv(out_path(run, "snr.csv"))[["position_m", "snr_db"]], outputs)

    gains = np.array([narrowband_gain(s)[run.polarization] for s in snapshots])
    try:
        fading = separate_fading(gains, positions, run.band.wavelength)
        write_frame(run, "fading.csv", pd.DataFrame({
            "position_m": fading.positions,
            "large_scale_db": fading.large_scale_interp_db,
            "small_scale": fading.small_scale,
        }), outputs)
        write_frame(run, "small_scale_pdf.csv", small_scale_pdf_table(fading.small_scale), outputs)
    except DomainError as e:
        logger.warning("[作图] 轨迹短于衰落窗，跳过衰落数据表: %s", e)
    return outputs


def handle(args):
    run = run_config_from_args(args)
    write_manifest(run, "plots", emit_plot_tables(run))
    return 0


def register(subparsers, common):
    parser = subparsers.add_parser("plots", parents=[common], help="输出作图数据表")
    parser.set_defaults(handler=handle)
    return parser
