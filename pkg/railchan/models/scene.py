# -*- coding: utf-8 -*-
"""
场景几何数据模型
材料、多边形面、劈、场景以及参数化场景描述
"""

from dataclasses import dataclass, field, fields
from functools import cached_property
from typing import Dict, Optional, Tuple

import numpy as np

from railchan.config import (
    DEFAULT_SCATTER_ALPHA, DEFAULT_SCATTER_S, DEFAULT_SCENE,
    MODULE_KINDS, OBJECT_CLASSES, CLASS_MATERIALS
)
from railchan.errors import ValidationError, SceneLookupError

Point3 = Tuple[float, float, float]


@dataclass(frozen=True)
class Material:
    """
    电磁材料（e^{+jωt} 约定，复介电常数 ε = ε'·(1 − j·tanδ)）

    字段:
        name: 材料名
        eps_r: 相对介电常数实部 (≥ 1)
        tan_delta: 损耗角正切 (≥ 0)
        scatter_s: 散射系数 S ∈ [0, 1]
        scatter_alpha: 散射瓣指数 α_R (整数 ≥ 1)
        veg_atten: 植被比衰减 dB/m
    """
    name: str
    eps_r: float
    tan_delta: float
    scatter_s: float = DEFAULT_SCATTER_S
    scatter_alpha: int = DEFAULT_SCATTER_ALPHA
    veg_atten: float = 0.0

    def __post_init__(self):
        bad = []
        if not self.eps_r >= 1.0:
            bad.append("eps_r")
        if not self.tan_delta >= 0.0:
            bad.append("tan_delta")
        if not 0.0 <= self.scatter_s <= 1.0:
            bad.append("scatter_s")
        if int(self.scatter_alpha) != self.scatter_alpha or self.scatter_alpha < 1:
            bad.append("scatter_alpha")
        if not self.veg_atten >= 0.0:
            bad.append("veg_atten")
        if bad:
            raise ValidationError(f"材料 {self.name} 参数非法", bad)

    @property
    def permittivity(self):
        """复相对介电常数"""
        return complex(self.eps_r, -self.eps_r * self.tan_delta)


@dataclass(frozen=True)
class Surface:
    """
    平面凸多边形面，顶点逆时针（从外侧看）

    字段:
        id: 面编号（场景内唯一）
        vertices: 顶点坐标元组 (m)
        material: 材料
        object_class: 对象类别
        object_id: 所属对象编号
    """
    id: int
    vertices: Tuple[Point3, ...]
    material: Material
    object_class: str
    object_id: int

    @cached_property
    def points(self):
        return np.asarray(self.vertices, dtype=float)

    @cached_property
    def normal(self):
        # Newell 法求外法向，对轻微非平面也稳健
        p = self.points
        q = np.roll(p, -1, axis=0)
        n = np.array([
            np.sum((p[:, 1] - q[:, 1]) * (p[:, 2] + q[:, 2])),
            np.sum((p[:, 2] - q[:, 2]) * (p[:, 0] + q[:, 0])),
            np.sum((p[:, 0] - q[:, 0]) * (p[:, 1] + q[:, 1])),
        ])
        norm = np.linalg.norm(n)
        if norm == 0:
            return n
        return n / norm

    @cached_property
    def offset(self):
        """平面方程 n·x = offset"""
        return float(self.normal @ self.points.mean(axis=0))

    @cached_property
    def centroid(self):
        return self.points.mean(axis=0)

    @cached_property
    def area(self):
        p = self.points
        cross = np.cross(p - p[0], np.roll(p, -1, axis=0) - p[0]).sum(axis=0)
        return float(0.5 * abs(cross @ self.normal))

    @property
    def is_vegetation(self):
        return self.material.veg_atten > 0 or self.object_class == "vegetation"


@dataclass(frozen=True)
class Wedge:
    """
    绕射劈

    字段:
        id: 劈编号
        edge: 棱的两个端点
        face_a: o 面编号（φ 从该面起算）
        face_b: n 面编号（孤立薄板时与 face_a 相同）
        exterior_angle: 外角 nπ (rad)，1 < n ≤ 2
    """
    id: int
    edge: Tuple[Point3, Point3]
    face_a: int
    face_b: int
    exterior_angle: float

    @property
    def n(self):
        return self.exterior_angle / np.pi


@dataclass(frozen=True)
class Scene:
    """
    场景：面、劈和元数据；构造后只读

    元数据包含模块名、完整/精简标志、构造参数、屏障信息和精简报告
    """
    surfaces: Tuple[Surface, ...]
    wedges: Tuple[Wedge, ...] = ()
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [s.id for s in self.surfaces]
        if len(set(ids)) != len(ids):
            raise ValidationError("面编号重复", ["surfaces"])
        known = set(ids)
        dangling = [str(w.id) for w in self.wedges if w.face_a not in known or w.face_b not in known]
        if dangling:
            raise ValidationError("劈引用了不存在的面", dangling)

    @cached_property
    def _by_id(self):
        return {s.id: s for s in self.surfaces}

    def surface(self, surface_id):
        try:
            return self._by_id[surface_id]
        except KeyError:
            raise SceneLookupError(f"未知面编号 {surface_id}") from None

    @cached_property
    def objects(self):
        """{object_id: (surfaces...)}，按首次出现顺序"""
        grouped = {}
        for s in self.surfaces:
            grouped.setdefault(s.object_id, []).append(s)
        return {k: tuple(v) for k, v in grouped.items()}

    def object_class(self, object_id):
        surfaces = self.objects.get(object_id)
        if not surfaces:
            raise SceneLookupError(f"未知对象编号 {object_id}")
        return surfaces[0].object_class

    @cached_property
    def bounding_box(self):
        if not self.surfaces:
            return np.zeros(3), np.zeros(3)
        pts = np.vstack([s.points for s in self.surfaces])
        return pts.min(axis=0), pts.max(axis=0)

    def contains(self, point, margin=1e-6):
        lo, hi = self.bounding_box
        p = np.asarray(point, dtype=float)
        return bool(np.all(p >= lo - margin) and np.all(p <= hi + margin))

    def with_metadata(self, **updates):
        meta = dict(self.metadata)
        meta.update(updates)
        return Scene(self.surfaces, self.wedges, meta)


@dataclass(frozen=True)
class FurnitureSpec:
    """隧道附属设施（贴墙长方体）"""
    x: float
    side: int = 1
    length: float = 2.0
    height: float = 1.0
    depth: float = 0.5


@dataclass(frozen=True)
class ScenarioSpec:
    """
    参数化场景描述；尺寸默认值为工程假设

    x 轴沿线路，y 轴横向，z 轴向上；线路区间 x ∈ [0, length]
    """
    module_kind: str
    length: float = DEFAULT_SCENE["length"]
    corridor_width: float = DEFAULT_SCENE["corridor_width"]
    track_spacing: float = DEFAULT_SCENE["track_spacing"]
    rail_width: float = DEFAULT_SCENE["rail_width"]
    rail_height: float = DEFAULT_SCENE["rail_height"]
    barrier_height: float = DEFAULT_SCENE["barrier_height"]
    barrier_offset: float = DEFAULT_SCENE["barrier_offset"]
    barrier_thickness: float = DEFAULT_SCENE["barrier_thickness"]
    pylon_spacing: float = DEFAULT_SCENE["pylon_spacing"]
    pylon_height: float = DEFAULT_SCENE["pylon_height"]
    pylon_offset: float = DEFAULT_SCENE["pylon_offset"]
    pylon_width: float = DEFAULT_SCENE["pylon_width"]
    deck_height: float = DEFAULT_SCENE["deck_height"]
    deck_width: float = DEFAULT_SCENE["deck_width"]
    deck_thickness: float = DEFAULT_SCENE["deck_thickness"]
    tunnel_width: float = DEFAULT_SCENE["tunnel_width"]
    tunnel_height: float = DEFAULT_SCENE["tunnel_height"]
    tunnel_shape: str = DEFAULT_SCENE["tunnel_shape"]
    arch_segments: int = DEFAULT_SCENE["arch_segments"]
    cutting_offset: float = DEFAULT_SCENE["cutting_offset"]
    cutting_height: float = DEFAULT_SCENE["cutting_height"]
    bridge_clearance: float = DEFAULT_SCENE["bridge_clearance"]
    bridge_width: float = DEFAULT_SCENE["bridge_width"]
    bridge_thickness: float = DEFAULT_SCENE["bridge_thickness"]
    portal_height: float = DEFAULT_SCENE["portal_height"]
    building_offset: float = DEFAULT_SCENE["building_offset"]
    building_spacing: float = DEFAULT_SCENE["building_spacing"]
    building_length: float = DEFAULT_SCENE["building_length"]
    building_depth: float = DEFAULT_SCENE["building_depth"]
    building_height: float = DEFAULT_SCENE["building_height"]
    station_length: float = DEFAULT_SCENE["station_length"]
    platform_height: float = DEFAULT_SCENE["platform_height"]
    platform_width: float = DEFAULT_SCENE["platform_width"]
    awning_height: float = DEFAULT_SCENE["awning_height"]
    cct_length: float = DEFAULT_SCENE["cct_length"]
    cct_width: float = DEFAULT_SCENE["cct_width"]
    cct_height: float = DEFAULT_SCENE["cct_height"]
    vegetation_offset: float = DEFAULT_SCENE["vegetation_offset"]
    vegetation_spacing: float = DEFAULT_SCENE["vegetation_spacing"]
    vegetation_size: Tuple[float, float, float] = DEFAULT_SCENE["vegetation_size"]
    billboard_spacing: float = DEFAULT_SCENE["billboard_spacing"]
    billboard_setback: float = DEFAULT_SCENE["billboard_setback"]
    billboard_width: float = DEFAULT_SCENE["billboard_width"]
    billboard_height: float = DEFAULT_SCENE["billboard_height"]
    billboard_clearance: float = DEFAULT_SCENE["billboard_clearance"]
    billboard_depth: float = DEFAULT_SCENE["billboard_depth"]
    sign_spacing: float = DEFAULT_SCENE["sign_spacing"]
    sign_width: float = DEFAULT_SCENE["sign_width"]
    sign_height: float = DEFAULT_SCENE["sign_height"]
    sign_elevation: float = DEFAULT_SCENE["sign_elevation"]
    train_x: float = DEFAULT_SCENE["train_x"]
    train_length: float = DEFAULT_SCENE["train_length"]
    train_width: float = DEFAULT_SCENE["train_width"]
    train_height: float = DEFAULT_SCENE["train_height"]
    include_train: Optional[bool] = None
    furniture: Tuple[FurnitureSpec, ...] = ()
    materials: Dict[str, str] = field(default_factory=dict)

    # 这些字段允许为 0
    _NON_NEGATIVE = ("barrier_height",)
    _NON_DIMENSIONAL = ("module_kind", "tunnel_shape", "arch_segments", "include_train",
                        "furniture", "materials", "vegetation_size")

    @property
    def double_track(self):
        return self.module_kind != "m6"

    @property
    def has_train(self):
        if self.include_train is None:
            return self.module_kind != "m6"
        return bool(self.include_train)

    @property
    def is_tunnel(self):
        return self.module_kind == "m5"

    @property
    def base_z(self):
        """轨面所在高度：高架模块为桥面，其余为地面"""
        return self.deck_height if self.module_kind in ("m2", "m6") else 0.0

    @property
    def track_centers(self):
        if self.double_track:
            return (-self.track_spacing / 2.0, self.track_spacing / 2.0)
        return (0.0,)

    def material_for(self, object_class):
        return self.materials.get(object_class, CLASS_MATERIALS[object_class])

    def invalid_fields(self):
        """返回所有不满足约束的字段名"""
        bad = []
        if self.module_kind not in MODULE_KINDS:
            bad.append("module_kind")
        for f in fields(self):
            if f.name in self._NON_DIMENSIONAL:
                continue
            value = getattr(self, f.name)
            if f.name in self._NON_NEGATIVE:
                if not value >= 0:
                    bad.append(f.name)
            elif not value > 0:
                bad.append(f.name)
        if self.tunnel_shape not in ("rect", "arch"):
            bad.append("tunnel_shape")
        if int(self.arch_segments) != self.arch_segments or self.arch_segments < 1:
            bad.append("arch_segments")
        if len(self.vegetation_size) != 3 or min(self.vegetation_size) <= 0:
            bad.append("vegetation_size")
        for i, item in enumerate(self.furniture):
            if item.side not in (-1, 1) or min(item.length, item.height, item.depth) <= 0:
                bad.append(f"furniture[{i}]")
        for cls in self.materials:
            if cls not in OBJECT_CLASSES:
                bad.append(f"materials.{cls}")
        return bad
