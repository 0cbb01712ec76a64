# -*- coding: utf-8 -*-
"""
参数化场景构造模块
六类铁路场景模块的简化几何：地面、双线轨道、声屏障、接触网立柱、交通标志、广告牌及各模块特有对象

坐标约定：x 沿线路 [0, length]，y 横向，z 向上；
双线轨道中心 y = ±track_spacing/2，单线（M6）位于 y = 0
"""

import logging
import math
from dataclasses import fields

import numpy as np

from railchan.config import MODULE_NAMES, URBAN_BUILDING_MATERIALS
from railchan.errors import ValidationError
from railchan.models.scene import Scene, Surface
from railchan.services.materials import material_map
from railchan.services.wedges import extract_wedges

logger = logging.getLogger(__name__)


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, '__dataclass_fields__'):
        return {f.name: _jsonable(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


class _SceneAssembler:
    """按顺序分配面编号和对象编号"""

    def __init__(self, spec, materials):
        self.spec = spec
        self.materials = materials
        self.surfaces = []
        self._next_surface = 0
        self._next_object = 0

    def _material(self, object_class, material_name=None):
        name = material_name or self.spec.material_for(object_class)
        return self.materials[name]

    def add_object(self, object_class, polygons, material_name=None):
        material = self._material(object_class, material_name)
        object_id = self._next_object
        self._next_object += 1
        for vertices in polygons:
            verts = tuple(tuple(float(c) for c in v) for v in vertices)
            self.surfaces.append(Surface(self._next_surface, verts, material, object_class, object_id))
            self._next_surface += 1
        return object_id

    def add_box(self, object_class, x0, x1, y0, y1, z0, z1, material_name=None):
        return self.add_object(object_class, box_faces(x0, x1, y0, y1, z0, z1), material_name)


def box_faces(x0, x1, y0, y1, z0, z1):
    """长方体的 6 个面，顶点从外侧看为逆时针"""
    return [
        [(x0, y0, z0), (x0, y1, z0), (x1, y1, z0), (x1, y0, z0)],  # 底 −z
        [(x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1)],  # 顶 +z
        [(x0, y0, z0), (x1, y0, z0), (x1, y0, z1), (x0, y0, z1)],  # −y
        [(x0, y1, z0), (x0, y1, z1), (x1, y1, z1), (x1, y1, z0)],  # +y
        [(x0, y0, z0), (x0, y0, z1), (x0, y1, z1), (x0, y1, z0)],  # −x
        [(x1, y0, z0), (x1, y1, z0), (x1, y1, z1), (x1, y0, z1)],  # +x
    ]


def oriented(vertices, facing_point):
    """调整顶点顺序，使法向指向 facing_point 一侧"""
    p = np.asarray(vertices, dtype=float)
    n = np.cross(p[1] - p[0], p[2] - p[0])
    if n @ (np.asarray(facing_point, dtype=float) - p[0]) < 0:
        return list(reversed(vertices))
    return list(vertices)


def _x_plate(x0, x1, ya, za, yb, zb, facing):
    """沿 x 方向拉伸的矩形板，横截面为 (ya, za)-(yb, zb) 线段"""
    return oriented([(x0, ya, za), (x1, ya, za), (x1, yb, zb), (x0, yb, zb)], facing)


def pylon_positions(spec):
    """立柱 x 坐标：0, s, 2s, … ≤ length"""
    count = int(math.floor(spec.length / spec.pylon_spacing + 1e-9)) + 1
    return [i * spec.pylon_spacing for i in range(count)]


def building_count(spec):
    """单侧建筑数 floor((length − building_length)/spacing) + 1，长度不足时为 0"""
    if spec.length < spec.building_length:
        return 0
    return int(math.floor((spec.length - spec.building_length) / spec.building_spacing + 1e-9)) + 1


def vegetation_count(spec):
    """单侧植被块数 floor(length / vegetation_spacing)"""
    return int(math.floor(spec.length / spec.vegetation_spacing + 1e-9))


def _track_count(spec):
    return len(spec.track_centers)


def surface_count(spec):
    """
    各模块面数公式（与构造顺序一一对应）

    公共部分: 地面 1 + 每条轨道 6 + 屏障 2×6 + 立柱 6×侧数×立柱数 + 交通标志 6×n_s + 列车 6
    地面模块 M1/M3/M4 另加广告牌 13×n_a（立柱 6 + 框架 6 + 屏幕 1）
    M1: + 路堑墙 2 + 跨线桥 6 + 隧道洞门 3
    M2: + 桥面 6 + 站台 6
    M3: + 建筑 2×6×n_b + 站台 6 + 雨棚 1 + 指示屏 6 + 站房后墙 1
    M4: + 明挖隧道 3 + 植被 2×6×n_v
    M5: 地面 1 + 侧墙 2 + 顶 1（拱形为 N 条）+ 轨道 12 + 列车 6 + 6×附属设施数
    M6: 地面 1 + 桥面 6 + 轨道 6 + 屏障 12 + 单侧立柱
    """
    kind = spec.module_kind
    train = 6 if spec.has_train else 0
    if kind == "m5":
        roof = 1 if spec.tunnel_shape == "rect" else spec.arch_segments
        return 1 + 2 + roof + 6 * _track_count(spec) + train + 6 * len(spec.furniture)

    barriers = 12 if spec.barrier_height > 0 else 0
    sides = 2 if spec.double_track else 1
    common = 1 + 6 * _track_count(spec) + barriers + 6 * sides * len(pylon_positions(spec)) + train
    common += 6 * sign_count(spec)
    if kind in ("m1", "m3", "m4"):
        common += 13 * billboard_count(spec)
    if kind == "m1":
        return common + 2 + 6 + 3
    if kind == "m2":
        return common + 6 + 6
    if kind == "m3":
        return common + 12 * building_count(spec) + 6 + 1 + 6 + 1
    if kind == "m4":
        return common + 3 + 12 * vegetation_count(spec)
    return common + 6


def _validate(spec):
    bad = spec.invalid_fields()
    if spec.module_kind == "m5" and spec.tunnel_shape == "arch" and not spec.tunnel_height > spec.tunnel_width / 2:
        bad.append("tunnel_height")
    if spec.has_train and not spec.train_x < spec.length:
        bad.append("train_x")
    if bad:
        raise ValidationError("场景参数非法", bad)


def build_module(spec, materials=None):
    """
    构造完整版场景

    参数:
        spec: ScenarioSpec
        materials: 可选材料表（默认内置材料表）

    返回:
        Scene: 面、劈以及元数据（模块名、完整版标志、构造参数、屏障信息）
    """
    _validate(spec)
    asm = _SceneAssembler(spec, material_map(materials))

    if spec.module_kind == "m5":
        _build_tunnel(asm, spec)
    else:
        _build_outdoor(asm, spec)

    metadata = {
        "module": spec.module_kind,
        "name": MODULE_NAMES[spec.module_kind],
        "version": "complete",
        "params": _jsonable(spec),
        "base_z": spec.base_z,
        "barrier_height": spec.barrier_height if spec.module_kind != "m5" else 0.0,
        "barrier_offset": spec.barrier_offset,
    }
    surfaces = tuple(asm.surfaces)
    draft = Scene(surfaces, (), metadata)
    scene = Scene(surfaces, tuple(extract_wedges(draft)), metadata)
    logger.info("[场景构造] %s: %d 个面, %d 条劈", spec.module_kind, len(scene.surfaces), len(scene.wedges))
    return scene


def _add_tracks(asm, spec):
    z0 = spec.base_z
    for yc in spec.track_centers:
        asm.add_box("track", 0.0, spec.length, yc - spec.rail_width / 2, yc + spec.rail_width / 2,
                    z0, z0 + spec.rail_height)


def _add_train(asm, spec):
    if not spec.has_train:
        return
    yc = spec.track_centers[-1]
    z0 = spec.base_z + spec.rail_height
    x1 = min(spec.train_x + spec.train_length, spec.length)
    asm.add_box("train", spec.train_x, x1, yc - spec.train_width / 2, yc + spec.train_width / 2,
                z0, z0 + spec.train_height)


def _add_barriers(asm, spec):
    if spec.barrier_height <= 0:
        return
    z0 = spec.base_z
    half = spec.barrier_thickness / 2
    for yc in (-spec.barrier_offset, spec.barrier_offset):
        asm.add_box("barrier", 0.0, spec.length, yc - half, yc + half, z0, z0 + spec.barrier_height)


def _add_pylons(asm, spec):
    z0 = spec.base_z
    half = spec.pylon_width / 2
    sides = (-spec.pylon_offset, spec.pylon_offset) if spec.double_track else (-spec.pylon_offset,)
    for xp in pylon_positions(spec):
        for yc in sides:
            asm.add_box("pylon", xp - half, xp + half, yc - half, yc + half, z0, z0 + spec.pylon_height)


def billboard_count(spec):
    """广告牌数 floor(length / billboard_spacing)，位于 +y 侧屏障外"""
    return int(math.floor(spec.length / spec.billboard_spacing + 1e-9))


def sign_count(spec):
    """交通标志数 floor(length / sign_spacing)，位于 −y 侧屏障内"""
    return int(math.floor(spec.length / spec.sign_spacing + 1e-9))


def _add_billboards(asm, spec):
    """混凝土立柱 + 金属框架 + 朝向线路的 LED 屏"""
    half_w = spec.billboard_width / 2
    y0 = spec.barrier_offset + spec.barrier_thickness / 2 + spec.billboard_setback
    y1 = y0 + spec.billboard_depth
    z0 = spec.billboard_clearance
    z1 = z0 + spec.billboard_height
    post = min(0.3, half_w)
    for i in range(billboard_count(spec)):
        xc = (i + 0.5) * spec.billboard_spacing
        asm.add_box("billboard", xc - post, xc + post, y0, y1, 0.0, z0, material_name="Concrete")
        asm.add_box("billboard", xc - half_w, xc + half_w, y0, y1, z0, z1)
        ys = y0 - 0.02
        screen = [(xc - half_w, ys, z0), (xc + half_w, ys, z0), (xc + half_w, ys, z1), (xc - half_w, ys, z1)]
        asm.add_object("billboard", [oriented(screen, (xc, 0.0, (z0 + z1) / 2))], material_name="LED")


def _add_signs(asm, spec):
    outer = spec.barrier_offset - spec.barrier_thickness / 2 - 0.1
    y0, y1 = -outer, -outer + spec.sign_width
    z0 = spec.base_z + spec.sign_elevation
    for i in range(sign_count(spec)):
        xc = (i + 0.5) * spec.sign_spacing
        asm.add_box("traffic_sign", xc - 0.025, xc + 0.025, y0, y1, z0, z0 + spec.sign_height)


def _ground_half_width(spec):
    half = spec.corridor_width / 2
    if spec.module_kind == "m3":
        half = max(half, spec.building_offset + spec.building_depth)
    return half


def _add_ground(asm, spec, half_width):
    asm.add_object("ground", [[(0.0, -half_width, 0.0), (spec.length, -half_width, 0.0),
                               (spec.length, half_width, 0.0), (0.0, half_width, 0.0)]])


def _station_range(spec):
    half = min(spec.station_length, spec.length) / 2
    return spec.length / 2 - half, spec.length / 2 + half


def _platform_span(spec):
    """站台横向范围：列车外侧到屏障内表面"""
    y0 = spec.track_spacing / 2 + spec.train_width / 2 + 0.05
    inner = spec.barrier_offset - spec.barrier_thickness / 2 - 0.05
    return y0, max(y0 + 0.1, min(y0 + spec.platform_width, inner))


def _add_platform(asm, spec):
    x0, x1 = _station_range(spec)
    y0, y1 = _platform_span(spec)
    z0 = spec.base_z
    asm.add_box("station", x0, x1, y0, y1, z0, z0 + spec.platform_height)


def _build_outdoor(asm, spec):
    kind = spec.module_kind
    _add_ground(asm, spec, _ground_half_width(spec))
    if kind in ("m2", "m6"):
        # 高架桥面：顶面即轨面所在高度
        half = spec.deck_width / 2
        asm.add_box("ground", 0.0, spec.length, -half, half,
                    spec.deck_height - spec.deck_thickness, spec.deck_height)
    _add_tracks(asm, spec)
    _add_barriers(asm, spec)
    _add_pylons(asm, spec)
    _add_signs(asm, spec)
    _add_train(asm, spec)
    if kind in ("m1", "m3", "m4"):
        _add_billboards(asm, spec)

    if kind == "m1":
        _build_cutting(asm, spec)
    elif kind == "m2":
        _add_platform(asm, spec)
    elif kind == "m3":
        _build_urban(asm, spec)
    elif kind == "m4":
        _build_cut_and_cover(asm, spec)


def _build_cutting(asm, spec):
    L, off = spec.length, spec.cutting_offset
    axis = (L / 2, 0.0, spec.cutting_height / 2)
    for yc in (-off, off):
        asm.add_object("cutting_wall", [_x_plate(0.0, L, yc, 0.0, yc, spec.cutting_height, axis)])

    half = spec.bridge_width / 2
    z0 = spec.bridge_clearance
    asm.add_box("crossing_bridge", L / 2 - half, L / 2 + half, -off, off, z0, z0 + spec.bridge_thickness)

    # 线路终点的隧道洞门：洞口两侧与上方三块陡墙，朝向 −x
    hw, th, ph = spec.tunnel_width / 2, spec.tunnel_height, spec.portal_height
    front = (0.0, 0.0, 0.0)
    portal = [
        oriented([(L, -off, 0.0), (L, -hw, 0.0), (L, -hw, ph), (L, -off, ph)], front),
        oriented([(L, hw, 0.0), (L, off, 0.0), (L, off, ph), (L, hw, ph)], front),
        oriented([(L, -hw, th), (L, hw, th), (L, hw, ph), (L, -hw, ph)], front),
    ]
    asm.add_object("steep_wall", portal)


def _build_urban(asm, spec):
    n_b = building_count(spec)
    override = spec.materials.get("building")
    counter = 0
    for side in (-1, 1):
        for i in range(n_b):
            x0 = i * spec.building_spacing
            y_near = side * spec.building_offset
            y_far = side * (spec.building_offset + spec.building_depth)
            name = override or URBAN_BUILDING_MATERIALS[counter % len(URBAN_BUILDING_MATERIALS)]
            asm.add_box("building", x0, x0 + spec.building_length, min(y_near, y_far), max(y_near, y_far),
                        0.0, spec.building_height, material_name=name)
            counter += 1

    _add_platform(asm, spec)
    x0, x1 = _station_range(spec)
    z0 = spec.base_z
    za = z0 + spec.awning_height
    y_in, y_out = _platform_span(spec)
    # 雨棚朝下
    asm.add_object("awning", [oriented([(x0, 0.0, za), (x1, 0.0, za), (x1, y_out, za), (x0, y_out, za)],
                                       (spec.length / 2, y_out / 2, 0.0))])
    yc = (y_in + y_out) / 2
    asm.add_box("indicator", spec.length / 2 - 1.5, spec.length / 2 + 1.5, yc - 0.2, yc + 0.2, za - 0.8, za - 0.2)
    asm.add_object("station", [_x_plate(x0, x1, y_out, z0, y_out, za, (spec.length / 2, 0.0, za / 2))])


def _build_cut_and_cover(asm, spec):
    L = spec.length
    half_len = min(spec.cct_length, L) / 2
    x0, x1 = L / 2 - half_len, L / 2 + half_len
    hw, h = spec.cct_width / 2, spec.cct_height
    inside = (L / 2, 0.0, h / 2)
    asm.add_object("cct", [
        _x_plate(x0, x1, -hw, 0.0, -hw, h, inside),
        _x_plate(x0, x1, hw, 0.0, hw, h, inside),
        _x_plate(x0, x1, -hw, h, hw, h, inside),
    ])

    sx, sy, sz = spec.vegetation_size
    for side in (-1, 1):
        for i in range(vegetation_count(spec)):
            xc = (i + 0.5) * spec.vegetation_spacing
            y_near = side * spec.vegetation_offset
            y_far = side * (spec.vegetation_offset + sy)
            asm.add_box("vegetation", xc - sx / 2, xc + sx / 2, min(y_near, y_far), max(y_near, y_far), 0.0, sz)


def tunnel_spring_height(spec):
    """拱形隧道起拱高度"""
    if spec.tunnel_shape == "rect":
        return spec.tunnel_height
    return spec.tunnel_height - spec.tunnel_width / 2


def _arch_point(hw, spring, angle, at_spring):
    # 两端点精确落在侧墙顶棱上，保证共享棱逐位一致
    if at_spring:
        return (hw if angle == 0 else -hw), spring
    return hw * math.cos(angle), spring + hw * math.sin(angle)


def _build_tunnel(asm, spec):
    L = spec.length
    hw = spec.tunnel_width / 2
    spring = tunnel_spring_height(spec)
    inside = (L / 2, 0.0, spring / 2)

    asm.add_object("ground", [[(0.0, -hw, 0.0), (L, -hw, 0.0), (L, hw, 0.0), (0.0, hw, 0.0)]])
    shell = [
        _x_plate(0.0, L, -hw, 0.0, -hw, spring, inside),
        _x_plate(0.0, L, hw, 0.0, hw, spring, inside),
    ]
    if spec.tunnel_shape == "rect":
        shell.append(_x_plate(0.0, L, -hw, spring, hw, spring, inside))
    else:
        n = spec.arch_segments
        centre = (L / 2, 0.0, spring)
        for i in range(n):
            a0, a1 = math.pi * i / n, math.pi * (i + 1) / n
            ya, za = _arch_point(hw, spring, a0, i == 0)
            yb, zb = _arch_point(hw, spring, a1, i + 1 == n)
            shell.append(_x_plate(0.0, L, ya, za, yb, zb, centre))
    asm.add_object("tunnel_wall", shell)

    _add_tracks(asm, spec)
    _add_train(asm, spec)
    for item in spec.furniture:
        y_wall = item.side * hw
        y_in = y_wall - item.side * item.depth
        asm.add_box("furniture", item.x, item.x + item.length, min(y_wall, y_in), max(y_wall, y_in),
                    0.0, item.height)
