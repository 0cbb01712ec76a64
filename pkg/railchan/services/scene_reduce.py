# -*- coding: utf-8 -*-
"""
场景精简模块
室外：收发天线低于屏障时，屏障外侧对象对毫米波信道贡献可忽略；立柱、轨道总是略去
隧道：略去轨道以及面积小于 7 m² 的附属设施
"""

import logging

import numpy as np

from railchan.config import FURNITURE_AREA_THRESHOLD_M2
from railchan.errors import ClassificationError
from railchan.models.scene import Scene

logger = logging.getLogger(__name__)

# 室外精简时总是略去的类别
OUTDOOR_DROPPED = ("pylon", "track")
_OUTSIDE_EPS = 1e-6


def object_area(scene, object_id):
    """对象所有面的面积之和 (m²)"""
    scene.object_class(object_id)  # 未知编号抛 SceneLookupError
    return float(sum(s.area for s in scene.objects[object_id]))


def _barrier_extent(scene):
    """屏障对 (y_min, y_max) 以及屏障高度"""
    pts = np.vstack([s.points for s in scene.surfaces if s.object_class == "barrier"])
    height = scene.metadata.get("barrier_height")
    if height is None:
        height = float(pts[:, 2].max() - pts[:, 2].min())
    return float(pts[:, 1].min()), float(pts[:, 1].max()), float(height)


def _outside_barriers(surfaces, y_lo, y_hi):
    pts = np.vstack([s.points for s in surfaces])
    return bool(np.all(pts[:, 1] > y_hi + _OUTSIDE_EPS) or np.all(pts[:, 1] < y_lo - _OUTSIDE_EPS))


def _outdoor_keep(scene, tx_height, rx_height):
    y_lo, y_hi, barrier_h = _barrier_extent(scene)
    low_antennas = max(tx_height, rx_height) < barrier_h
    keep = set()
    for object_id, surfaces in scene.objects.items():
        cls = surfaces[0].object_class
        if cls in OUTDOOR_DROPPED:
            continue
        if low_antennas and _outside_barriers(surfaces, y_lo, y_hi):
            continue
        keep.add(object_id)
    return keep, {"rule": "outdoor", "low_antennas": low_antennas, "barrier_height": barrier_h}


def _tunnel_keep(scene):
    keep = set()
    for object_id, surfaces in scene.objects.items():
        cls = surfaces[0].object_class
        if cls == "track":
            continue
        if cls == "furniture" and object_area(scene, object_id) < FURNITURE_AREA_THRESHOLD_M2:
            continue
        keep.add(object_id)
    return keep, {"rule": "tunnel"}


def reduce_scene(scene, tx_height, rx_height):
    """
    由完整版场景生成精简版

    参数:
        scene: 完整版 Scene
        tx_height, rx_height: 收发天线高度（相对轨面，m）

    返回:
        Scene: 面集合为输入子集，元数据附带精简报告
    """
    classes = {s.object_class for s in scene.surfaces}
    if "barrier" in classes:
        keep, report = _outdoor_keep(scene, tx_height, rx_height)
    elif "tunnel_wall" in classes:
        keep, report = _tunnel_keep(scene)
    else:
        raise ClassificationError("场景既无屏障也无隧道壁，无法精简")

    surfaces = tuple(s for s in scene.surfaces if s.object_id in keep)
    kept_ids = {s.id for s in surfaces}
    wedges = tuple(w for w in scene.wedges if w.face_a in kept_ids and w.face_b in kept_ids)

    before, after = len(scene.surfaces), len(surfaces)
    report.update({
        "surfaces_before": before,
        "surfaces_after": after,
        "surface_reduction_pct": 100.0 * (before - after) / before if before else 0.0,
        "removed_classes": sorted({s.object_class for s in scene.surfaces if s.object_id not in keep}),
    })
    logger.info("[场景精简] %s: %d → %d 个面 (%.2f%%)", report["rule"], before, after,
                report["surface_reduction_pct"])
    meta = dict(scene.metadata)
    meta["version"] = "concise"
    meta["reduction"] = report
    return Scene(surfaces, wedges, meta)
