# -*- coding: utf-8 -*-
"""
绕射劈提取模块
同一对象内恰好被两个面共享的棱，外角在 (π, 2π] 的为劈；
非包络类的单面对象视为孤立薄板，每条边按半平面 (n = 2) 处理
"""

import logging
import math

import numpy as np

from railchan.config import ENCLOSING_CLASSES
from railchan.models.scene import Wedge

logger = logging.getLogger(__name__)

_ANGLE_TOL = 1e-9
_KEY_DIGITS = 9


def _point_key(p):
    return tuple(round(float(c), _KEY_DIGITS) + 0.0 for c in p)


def _edge_key(p, q):
    return frozenset((_point_key(p), _point_key(q)))


def _edges(surface):
    verts = surface.vertices
    return [(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))]


def exterior_angle(face_a, face_b, edge):
    """
    两面沿公共棱的外角（从实体外部量起）

    凸棱：b 面的非棱顶点位于 a 面后方，外角 = π + acos(na·nb)
    凹棱：外角 = π − acos(na·nb)
    """
    na, nb = face_a.normal, face_b.normal
    dihedral = math.acos(max(-1.0, min(1.0, float(na @ nb))))
    on_edge = {_point_key(edge[0]), _point_key(edge[1])}
    others = [v for v in face_b.points if _point_key(v) not in on_edge]
    if not others:
        return math.pi
    height = float((np.mean(others, axis=0) - np.asarray(edge[0])) @ na)
    if abs(height) < 1e-9:
        return math.pi
    return math.pi + dihedral if height < 0 else math.pi - dihedral


def extract_wedges(scene):
    """
    提取场景中所有绕射劈

    参数:
        scene: Scene

    返回:
        list[Wedge]: 按对象、面顺序编号
    """
    wedges = []
    for object_id, surfaces in scene.objects.items():
        if len(surfaces) == 1:
            plate = surfaces[0]
            if plate.object_class in ENCLOSING_CLASSES:
                continue
            for p, q in _edges(plate):
                wedges.append(Wedge(len(wedges), (p, q), plate.id, plate.id, 2.0 * math.pi))
            continue

        shared = {}
        for surface in surfaces:
            for p, q in _edges(surface):
                shared.setdefault(_edge_key(p, q), []).append((surface, (p, q)))

        for key, owners in shared.items():
            if len(owners) < 2:
                continue
            if len(owners) > 2:
                logger.warning("[劈提取] 对象 %s 有棱被 %d 个面共享，已跳过", object_id, len(owners))
                continue
            (face_a, edge), (face_b, _) = owners
            angle = exterior_angle(face_a, face_b, edge)
            if math.pi + _ANGLE_TOL < angle <= 2 * math.pi + _ANGLE_TOL:
                wedges.append(Wedge(len(wedges), edge, face_a.id, face_b.id, angle))
    return wedges
