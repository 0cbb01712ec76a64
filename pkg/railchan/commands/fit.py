# -*- coding: utf-8 -*-
"""
fit 子命令
stats.csv → 随机信道模型参数 params.ini
"""

import logging

from railchan.commands.common import out_path, require_inputs, run_config_from_args, write_manifest
from railchan.models.stats import LinkStats
from railchan.services.persistence import read_csv
from railchan.services.stochgen import fit_params, save_params

logger = logging.getLogger(__name__)

_STATS_FIELDS = ("path_loss_db", "k_factor_db", "rms_delay_spread_s", "coherence_bw_hz",
                 "asa_deg", "asd_deg", "esa_deg", "esd_deg")


def stats_from_frame(frame):
    """stats.csv 每行还原为 LinkStats，同时返回收发距离"""
    stats = [LinkStats(*(float(row[f]) for f in _STATS_FIELDS)) for _, row in frame.iterrows()]
    return stats, frame["distance_m"].astype(float).tolist()


def handle(args):
    run = run_config_from_args(args)
    require_inputs(run, "stats.csv")
    stats, distances = stats_from_frame(read_csv(out_path(run, "stats.csv")))
    params = fit_params(stats, distances,
                        n_clusters=run.value("stochastic.n_clusters"),
                        intra_cluster_decay=run.value("stochastic.intra_cluster_decay"))
    save_params(out_path(run, "params.ini"), params)
    write_manifest(run, "fit", ["params.ini"])
    return 0


def register(subparsers, common):
    parser = subparsers.add_parser("fit", parents=[common], help="拟合随机信道模型参数")
    parser.set_defaults(handler=handle)
    return parser
