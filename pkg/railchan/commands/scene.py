# -*- coding: utf-8 -*-
"""
scene 子命令
构造（并可精简）场景，写出场景文件与摘要；--benchmark 对比完整版与精简版追踪耗时
"""

import dataclasses
import logging
import time

import numpy as np

from railchan.commands.common import (
    out_path, output_dir, prepare_scene, run_config_from_args, write_manifest
)
from railchan.config import MODULE_KINDS
from railchan.services.persistence import atomic_write_json
from railchan.services.run_config import build_run_config
from railchan.services.scene_io import save_scene
from railchan.services.scene_reduce import reduce_scene
from railchan.services.tracer import TraceContext, snapshot_rng, trace_batch

logger = logging.getLogger(__name__)

BENCHMARK_ORDER = 3
# 参考精简幅度区间 (%)
REFERENCE_SURFACE_REDUCTION = (54.46, 78.71)
REFERENCE_RUNTIME_REDUCTION = (69.95, 89.90)


def scene_summary(scene):
    counts = {}
    for s in scene.surfaces:
        counts[s.object_class] = counts.get(s.object_class, 0) + 1
    meta = scene.metadata
    return {
        "module": meta.get("module"),
        "version": meta.get("version"),
        "surfaces": len(scene.surfaces),
        "wedges": len(scene.wedges),
        "objects": len(scene.objects),
        "surfaces_by_class": counts,
        "reduction": meta.get("reduction"),
    }


def _timed_trace(scene, run, trace_cfg):
    start = time.perf_counter()
    ctx = TraceContext(scene, trace_cfg)
    rx = np.asarray(run.trajectory.start, dtype=float)
    paths = trace_batch(ctx, run.tx, rx[None, :], [snapshot_rng(run.seed, 0)])[0]
    return time.perf_counter() - start, len(paths)


def benchmark_module(run):
    """完整版与精简版场景在 3 阶反射下的面数与追踪耗时对比"""
    trace_cfg = dataclasses.replace(run.trace, max_reflection_order=BENCHMARK_ORDER)
    complete = prepare_scene(run, concise=False)
    concise = reduce_scene(complete, run.tx_height, run.rx_height)
    t_full, n_full = _timed_trace(complete, run, trace_cfg)
    t_short, n_short = _timed_trace(concise, run, trace_cfg)
    report = dict(concise.metadata["reduction"])
    report.update({
        "module": run.scenario.module_kind,
        "trace_order": BENCHMARK_ORDER,
        "complete_trace_s": t_full,
        "concise_trace_s": t_short,
        "complete_paths": n_full,
        "concise_paths": n_short,
        "runtime_reduction_pct": 100.0 * (t_full - t_short) / t_full if t_full > 0 else 0.0,
    })
    logger.info("[场景精简] %s: 面数减少 %.2f%%, 追踪耗时减少 %.2f%%", report["module"],
                report["surface_reduction_pct"], report["runtime_reduction_pct"])
    return report


def handle(args):
    run = run_config_from_args(args)
    output_dir(run)
    outputs = []

    scene = prepare_scene(run)
    save_scene(scene, out_path(run, "scene.rcs"))
    outputs.append("scene.rcs")
    atomic_write_json(out_path(run, "scene_summary.json"), scene_summary(scene))
    outputs.append("scene_summary.json")

    if args.benchmark:
        modules = MODULE_KINDS if args.all_modules else (run.scenario.module_kind,)
        reports = []
        for kind in modules:
            flat = dict(run.flat)
            flat["scenario.module"] = kind
            reports.append(benchmark_module(build_run_config(flat)))
        # 含墙钟时间，不计入清单
        atomic_write_json(out_path(run, "reduction.json"), {
            "reference_surface_reduction_pct": list(REFERENCE_SURFACE_REDUCTION),
            "reference_runtime_reduction_pct": list(REFERENCE_RUNTIME_REDUCTION),
            "modules": reports,
        })

    write_manifest(run, "scene", outputs)
    return 0


def register(subparsers, common):
    parser = subparsers.add_parser("scene", parents=[common], help="构造场景")
    parser.add_argument("--length", type=float, help="线路长度 (m)")
    parser.add_argument("--barrier-height", type=float, help="屏障高度 (m)")
    parser.add_argument("--benchmark", action="store_true", help="对比完整版与精简版追踪耗时")
    parser.add_argument("--all-modules", action="store_true", help="基准测试覆盖全部模块")
    parser.set_defaults(handler=handle)
    return parser
