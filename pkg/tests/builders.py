# -*- coding: utf-8 -*-
"""
测试用场景与路径构造工具
"""

import numpy as np

from railchan.config import SPEED_OF_LIGHT
from railchan.models.channel import Interaction, PropagationPath
from railchan.models.scene import Scene, Surface
from railchan.services.materials import material_map
from railchan.services.scene_builder import box_faces
from railchan.services.wedges import extract_wedges

MATERIALS = material_map()


def inward_box(x0, x1, y0, y1, z0, z1, material="Concrete", object_class="building"):
    """六个面法向朝内的封闭房间，每个面单独成对象"""
    surfaces = []
    for i, face in enumerate(box_faces(x0, x1, y0, y1, z0, z1)):
        surfaces.append(Surface(i, tuple(reversed(face)), MATERIALS[material], object_class, i))
    return Scene(tuple(surfaces))


def corridor_scene(length=40.0, half_width=3.0, height=5.0):
    """地面、顶棚、两侧墙各分两段，加两端端墙，共 10 个朝内的面"""
    mid = length / 2
    w, h = half_width, height
    polygons = []
    for x0, x1 in ((0.0, mid), (mid, length)):
        polygons.append([(x0, -w, 0.0), (x1, -w, 0.0), (x1, w, 0.0), (x0, w, 0.0)])    # 地面 +z
        polygons.append([(x0, -w, h), (x0, w, h), (x1, w, h), (x1, -w, h)])            # 顶棚 −z
        polygons.append([(x0, -w, 0.0), (x0, -w, h), (x1, -w, h), (x1, -w, 0.0)])      # 左墙 +y
        polygons.append([(x0, w, 0.0), (x1, w, 0.0), (x1, w, h), (x0, w, h)])          # 右墙 −y
    polygons.append([(0.0, -w, 0.0), (0.0, w, 0.0), (0.0, w, h), (0.0, -w, h)])        # 端墙 +x
    polygons.append([(length, -w, h), (length, w, h), (length, w, 0.0), (length, -w, 0.0)])  # 端墙 −x
    surfaces = tuple(Surface(i, tuple(p), MATERIALS["Concrete"], "tunnel_wall", i)
                     for i, p in enumerate(polygons))
    return Scene(surfaces)


def plate(ident, vertices, material="Metal", object_class="billboard", object_id=None):
    return Surface(ident, tuple(tuple(map(float, v)) for v in vertices),
                   MATERIALS[material] if isinstance(material, str) else material,
                   object_class, ident if object_id is None else object_id)


def scene_with_wedges(surfaces, metadata=None):
    draft = Scene(tuple(surfaces), (), metadata or {})
    return Scene(draft.surfaces, tuple(extract_wedges(draft)), draft.metadata)


def make_path(delay, amplitude=1.0, aod=(0.0, 0.0), aoa=(0.0, 0.0), chain=(), gain=None):
    """合成路径；默认增益为 amplitude·I（同极化）"""
    if gain is None:
        gain = amplitude * np.eye(2, dtype=complex)
    return PropagationPath(
        mechanism_chain=tuple(chain),
        delay=float(delay),
        length=float(delay) * SPEED_OF_LIGHT,
        aod=tuple(aod),
        aoa=tuple(aoa),
        gain=np.asarray(gain, dtype=complex),
    )


def reflection(element_id, point=(0.0, 0.0, 0.0)):
    return Interaction("reflection", element_id, tuple(point))


