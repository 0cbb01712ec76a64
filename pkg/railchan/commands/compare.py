# -*- coding: utf-8 -*-
"""
compare 子命令
模型 SNR 曲线与测量曲线（本地文件或 URL）对比
"""

import logging

from railchan.commands.common import out_path, output_dir, run_config_from_args, write_manifest
from railchan.errors import ValidationError
from railchan.services.measurement import load_trace, is_url
from railchan.services.persistence import atomic_write_json
from railchan.services.stats import compare_traces

logger = logging.getLogger(__name__)


def handle(args):
    run = run_config_from_args(args)
    output_dir(run)
    if not args.measured:
        raise ValidationError("缺少测量数据来源", ["--measured"])
    model_source = args.model or out_path(run, "snr.csv")
    if is_url(model_source):
        raise ValidationError("模型曲线必须是本地文件", ["--model"])

    result = compare_traces(load_trace(model_source), load_trace(args.measured))
    result.update({"model": model_source, "measured": args.measured})
    atomic_write_json(out_path(run, "compare.json"), result)
    logger.info("[对比] 平均误差 %.2f dB，标准差 %.2f dB，%d 点",
                result["mean_error_db"], result["std_error_db"], result["n_points"])
    write_manifest(run, "compare", ["compare.json"])
    return 0


def register(subparsers, common):
    parser = subparsers.add_parser("compare", parents=[common], help="与测量 SNR 对比")
    parser.add_argument("--model", help="模型 SNR 文件（默认 <out>/snr.csv）")
    parser.add_argument("--measured", help="测量 SNR 文件路径或 http(s) 地址")
    parser.set_defaults(handler=handle)
    return parser
