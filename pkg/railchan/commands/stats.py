# -*- coding: utf-8 -*-
"""
stats 子命令
由扫描结果提取逐快照统计量、SNR 曲线、机制贡献以及拟合摘要
"""

import logging

import numpy as np
import pandas as pd

from railchan.commands.common import (
    load_ctfs, load_snapshots, out_path, positions_and_distances, run_config_from_args,
    write_frame, write_manifest
)
from railchan.errors import DomainError, EstimationError, FitError
from railchan.services.channel import narrowband_gain
from railchan.services.fading import separate_fading
from railchan.services.persistence import atomic_write_json, atomic_write_text
from railchan.services.stats import (
    fit_path_loss, fit_ricean, k_factor_moment, link_stats, mechanism_contribution, snr_trace
)

logger = logging.getLogger(__name__)

STATS_COLUMNS = [
    "snapshot_id", "position_m", "distance_m", "path_loss_db", "k_factor_db",
    "rms_delay_spread_s", "coherence_bw_hz", "asa_deg", "asd_deg", "esa_deg", "esd_deg",
]


def stats_frame(snapshots, ctfs, positions, distances, cb_level, pol):
    rows = []
    for snap, ctf, pos, dist in zip(snapshots, ctfs, positions, distances):
        s = link_stats(snap, ctf, cb_level, pol)
        rows.append([snap.index, pos, dist, s.path_loss_db, s.k_factor_db, s.rms_delay_spread_s,
                     s.coherence_bw_hz, s.asa_deg, s.asd_deg, s.esa_deg, s.esd_deg])
    return pd.DataFrame(rows, columns=STATS_COLUMNS)


def _median(series):
    values = series[np.isfinite(series)]
    return float(np.median(values)) if len(values) else None


def build_summary(run, snapshots, frame, positions):
    """拟合摘要：路径损耗、大小尺度衰落、莱斯拟合和扩展中位数"""
    summary = {"n_snapshots": len(snapshots), "polarization": run.polarization}
    for col in STATS_COLUMNS[4:]:
        summary[f"median_{col}"] = _median(frame[col].to_numpy(dtype=float))

    try:
        fit = fit_path_loss(zip(frame["distance_m"], frame["path_loss_db"]))
        summary["path_loss_fit"] = {"pl0_db": fit.pl0_db, "n": fit.n, "sigma_sf_db": fit.sigma_sf_db}
    except FitError as e:
        summary["path_loss_fit"] = None
        logger.warning("[统计] 路径损耗拟合跳过: %s", e)

    gains = np.array([narrowband_gain(s)[run.polarization] for s in snapshots])
    try:
        fading = separate_fading(gains, positions, run.band.wavelength)
        small = fading.small_scale[fading.small_scale > 0]
        summary["fading"] = {"windows": len(fading.centers),
                             "small_scale_mean_power": float(np.mean(small ** 2))}
        ricean = fit_ricean(small)
        summary["ricean_fit"] = {"k_db": ricean.k_db, "omega": ricean.omega,
                                 "ks_distance": ricean.goodness, "degenerate": ricean.degenerate}
        summary["k_factor_moment_db"] = k_factor_moment(small)
    except (DomainError, EstimationError) as e:
        summary.setdefault("fading", None)
        summary["ricean_fit"] = None
        logger.warning("[统计] 衰落分析跳过: %s", e)
    return summary


def summary_text(summary):
    lines = []
    for key in sorted(summary):
        value = summary[key]
        if isinstance(value, dict):
            for sub in sorted(value):
                lines.append(f"{key}.{sub} = {value[sub]}")
        else:
            lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def handle(args):
    run = run_config_from_args(args)
    snapshots = load_snapshots(run)
    ctfs = load_ctfs(run)
    if len(ctfs) != len(snapshots):
        raise DomainError(f"CTF 数量 {len(ctfs)} 与快照数量 {len(snapshots)} 不一致")
    positions, distances = positions_and_distances(run, snapshots)

    outputs = []
    frame = stats_frame(snapshots, ctfs, positions, distances, run.cb_level, run.polarization)
    write_frame(run, "stats.csv", frame, outputs)

    snr = snr_trace(frame["path_loss_db"].to_numpy(dtype=float), run.tx_power_dbm, run.noise_floor_dbm)
    write_frame(run, "snr.csv", pd.DataFrame({"position_m": positions, "snr_db": snr}), outputs)

    shares = mechanism_contribution(snapshots, run.polarization)
    write_frame(run, "mechanisms.csv",
                pd.DataFrame({"mechanism": list(shares), "power_share": list(shares.values())}), outputs)

    summary = build_summary(run, snapshots, frame, positions)
    atomic_write_json(out_path(run, "summary.json"), summary)
    atomic_write_text(out_path(run, "summary.txt"), summary_text(summary))
    outputs += ["summary.json", "summary.txt"]
    write_manifest(run, "stats", outputs)
    return 0


def register(subparsers, common):
    parser = subparsers.add_parser("stats", parents=[common], help="提取信道统计量")
    parser.set_defaults(handler=handle)
    return parser
