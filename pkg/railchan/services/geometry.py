# -*- coding: utf-8 -*-
"""
几何工具模块
镜像、凸多边形包含测试、遮挡检测、植被体穿越长度、散射瓦片剖分、方向角
"""

import logging
import math

import numpy as np

from railchan.config import OCCLUSION_EPS

logger = logging.getLogger(__name__)

# 遮挡检测一次处理的线段数，控制 线段×面×边 张量的内存
_OCCLUSION_CHUNK = 256


def normalize(v):
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / np.where(norm == 0, 1.0, norm)


def mirror_point(point, normal, offset):
    """关于平面 n·x = offset 的镜像点（支持批量）"""
    p = np.asarray(point, dtype=float)
    dist = p @ normal - offset
    return p - 2.0 * np.multiply.outer(dist, normal) if p.ndim > 1 else p - 2.0 * dist * normal


def mirror_direction(direction, normal):
    d = np.asarray(direction, dtype=float)
    return d - 2.0 * (d @ normal) * normal


def direction_angles(vec):
    """
    单位方向 → (方位角, 俯仰角)，单位度

    方位角 ∈ [−180, 180)，俯仰角 ∈ [−90, 90]
    """
    v = normalize(vec)
    az = math.degrees(math.atan2(v[1], v[0]))
    if az >= 180.0:
        az -= 360.0
    el = math.degrees(math.asin(max(-1.0, min(1.0, v[2]))))
    return az, el


def plane_basis(normal):
    """面内正交基 (u, v)，u × v = normal"""
    n = normalize(normal)
    ref = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = normalize(np.cross(ref, n))
    v = np.cross(n, u)
    return u, v


def points_in_polygon(surface, points, tol=OCCLUSION_EPS):
    """
    判断平面上的点是否落在凸多边形内（含边界容差）

    参数:
        surface: Surface
        points: (m, 3) 或 (3,) 的点，已假定位于该面所在平面

    返回:
        bool 数组（或单个 bool）
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    verts = surface.points
    edges = np.roll(verts, -1, axis=0) - verts
    rel = pts[:, None, :] - verts[None, :, :]
    side = np.einsum('mvk,k->mv', np.cross(edges[None, :, :], rel), surface.normal)
    inside = np.all(side >= -tol * np.linalg.norm(edges, axis=1)[None, :], axis=1)
    if np.ndim(points) == 1:
        return bool(inside[0])
    return inside


def surface_problems(surface, tol=1e-6):
    """
    检查面的结构约束：顶点数、共面、凸性、法向

    返回:
        list[str]: 问题描述，空列表表示合格
    """
    problems = []
    pts = surface.points
    if pts.ndim != 2 or len(pts) < 3:
        return [f"面 {surface.id} 顶点数不足 3"]
    n = surface.normal
    if not np.linalg.norm(n) > 0:
        return [f"面 {surface.id} 法向退化"]
    dev = np.abs(pts @ n - surface.offset)
    if dev.max() > tol:
        problems.append(f"面 {surface.id} 顶点不共面（偏差 {dev.max():.3g} m）")
    edges = np.roll(pts, -1, axis=0) - pts
    turn = np.cross(edges, np.roll(edges, -1, axis=0)) @ n
    if np.any(turn < -tol):
        problems.append(f"面 {surface.id} 非凸或绕向不一致")
    return problems


class PolygonPack:
    """
    一组凸多边形打包为定长顶点数组，供批量包含测试

    顶点数不足的多边形用末顶点补齐，补出的退化边不影响包含测试
    """

    def __init__(self, surfaces):
        self.ids = np.array([s.id for s in surfaces], dtype=int)
        n_max = max((len(s.vertices) for s in surfaces), default=3)
        count = len(surfaces)
        verts = np.zeros((count, n_max, 3))
        nxt = np.zeros((count, n_max, 3))
        for i, s in enumerate(surfaces):
            p = s.points
            verts[i, :len(p)] = p
            verts[i, len(p):] = p[-1]
            nxt[i, :len(p) - 1] = p[1:]
            nxt[i, len(p) - 1] = p[0]
            nxt[i, len(p):] = p[-1]
        self.verts = verts
        self.edges = nxt - verts
        self.edge_len = np.linalg.norm(self.edges, axis=2)
        self.normals = np.array([s.normal for s in surfaces]).reshape(count, 3)
        self.offsets = np.array([s.offset for s in surfaces], dtype=float)

    def __len__(self):
        return len(self.ids)

    def contains(self, rows, points, tol=OCCLUSION_EPS):
        """
        points[i] 是否落在第 rows[i] 个多边形内（点已假定在其平面上）

        参数:
            rows: (m,) 多边形行号
            points: (m, 3)
        """
        rel = points[:, None, :] - self.verts[rows]
        side = np.einsum('mvk,mk->mv', np.cross(self.edges[rows], rel), self.normals[rows])
        return np.all(side >= -tol * self.edge_len[rows], axis=1)


class OcclusionIndex:
    """
    不透明面的批量遮挡查询，在 线段 × 面 × 边 三维上向量化

    掠射（交点落在边界容差内）按遮挡处理；端点所在的作用面通过 exclude 排除
    """

    def __init__(self, surfaces, eps=OCCLUSION_EPS):
        self.eps = eps
        self.pack = PolygonPack([s for s in surfaces if not s.is_vegetation])

    @property
    def ids(self):
        return self.pack.ids

    def __len__(self):
        return len(self.pack)

    def blocked_many(self, starts, ends, exclude=None):
        """
        批量判断线段是否被遮挡

        参数:
            starts, ends: (m, 3) 线段端点
            exclude: (m, k) 每条线段需排除的面编号，-1 为占位

        返回:
            (m,) bool
        """
        a = np.atleast_2d(np.asarray(starts, dtype=float))
        b = np.atleast_2d(np.asarray(ends, dtype=float))
        m = len(a)
        result = np.zeros(m, dtype=bool)
        if len(self) == 0 or m == 0:
            return result
        if exclude is None:
            exclude = np.full((m, 1), -1, dtype=int)
        exclude = np.asarray(exclude, dtype=int).reshape(m, -1)

        for lo in range(0, m, _OCCLUSION_CHUNK):
            hi = min(lo + _OCCLUSION_CHUNK, m)
            result[lo:hi] = self._blocked_chunk(a[lo:hi], b[lo:hi], exclude[lo:hi])
        return result

    def _blocked_chunk(self, a, b, exclude):
        eps = self.eps
        pk = self.pack
        da = a @ pk.normals.T - pk.offsets          # (m, S)
        db = b @ pk.normals.T - pk.offsets
        reaches = (np.minimum(da, db) <= eps) & (np.maximum(da, db) >= -eps)
        own = np.any(pk.ids[None, :, None] == exclude[:, None, :], axis=2)
        reaches &= ~own
        if not reaches.any():
            return np.zeros(len(a), dtype=bool)

        rows, cols = np.nonzero(reaches)
        denom = da[rows, cols] - db[rows, cols]
        flat = np.abs(denom) < 1e-12
        # 线段落在平面内时取中点检测
        t = np.where(flat, 0.5, da[rows, cols] / np.where(flat, 1.0, denom))
        t = np.clip(t, 0.0, 1.0)
        hit = a[rows] + t[:, None] * (b[rows] - a[rows])
        inside = pk.contains(cols, hit, eps)
        out = np.zeros(len(a), dtype=bool)
        out[rows[inside]] = True
        return out

    def blocked(self, start, end, exclude=()):
        ex = np.array([list(exclude) or [-1]], dtype=int)
        return bool(self.blocked_many(np.asarray(start, dtype=float)[None, :],
                                      np.asarray(end, dtype=float)[None, :], ex)[0])


class VegetationIndex:
    """植被凸体集合：每个植被对象由其各面的外法向半空间围成"""

    def __init__(self, scene):
        self.volumes = []
        for object_id, surfaces in scene.objects.items():
            if not all(s.is_vegetation for s in surfaces):
                continue
            normals = np.array([s.normal for s in surfaces])
            offsets = np.array([s.offset for s in surfaces])
            atten = max(s.material.veg_atten for s in surfaces)
            self.volumes.append((object_id, normals, offsets, atten))

    def __len__(self):
        return len(self.volumes)

    def crossing_lengths(self, starts, ends):
        """
        线段在每个植被体内的穿越长度

        返回:
            (m, n_volumes) 长度矩阵 (m)
        """
        a = np.atleast_2d(np.asarray(starts, dtype=float))
        d = np.atleast_2d(np.asarray(ends, dtype=float)) - a
        seg_len = np.linalg.norm(d, axis=1)
        out = np.zeros((len(a), len(self.volumes)))
        for j, (_, normals, offsets, _) in enumerate(self.volumes):
            out[:, j] = seg_len * _clip_intervals(a, d, normals, offsets)
        return out

    def segment_loss_db(self, starts, ends):
        """批量线段的植被损耗 (dB)"""
        if not self.volumes:
            return np.zeros(len(np.atleast_2d(starts)))
        atten = np.array([v[3] for v in self.volumes])
        return self.crossing_lengths(starts, ends) @ atten

    def loss_db(self, points):
        """折线穿越所有植被体的总损耗 (dB)"""
        pts = np.asarray(points, dtype=float)
        return float(self.segment_loss_db(pts[:-1], pts[1:]).sum())


def _clip_intervals(a, d, normals, offsets):
    """Cyrus–Beck 批量裁剪，返回每条线段在凸体内的参数区间长度"""
    num = offsets[None, :] - a @ normals.T      # (m, F)
    den = d @ normals.T
    parallel = np.abs(den) < 1e-15
    safe = np.where(parallel, 1.0, den)
    t = num / safe
    t_enter = np.where(~parallel & (den < 0), t, 0.0).max(axis=1)
    t_exit = np.where(~parallel & (den > 0), t, 1.0).min(axis=1)
    t_enter = np.maximum(t_enter, 0.0)
    t_exit = np.minimum(t_exit, 1.0)
    outside = np.any(parallel & (num < 0), axis=1)
    return np.where(outside, 0.0, np.clip(t_exit - t_enter, 0.0, None))


def _clip_convex(poly, axis, bound, keep_less):
    """Sutherland–Hodgman：用轴对齐直线裁剪二维凸多边形"""
    out = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        cur_in = cur[axis] <= bound if keep_less else cur[axis] >= bound
        nxt_in = nxt[axis] <= bound if keep_less else nxt[axis] >= bound
        if cur_in:
            out.append(cur)
        if cur_in != nxt_in:
            t = (bound - cur[axis]) / (nxt[axis] - cur[axis])
            out.append(cur + t * (nxt - cur))
    return out


def _polygon_area_centroid(poly):
    p = np.asarray(poly)
    x, y = p[:, 0], p[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = cross.sum() / 2.0
    if abs(area) < 1e-15:
        return 0.0, p.mean(axis=0)
    cx = ((x + xn) * cross).sum() / (6.0 * area)
    cy = ((y + yn) * cross).sum() / (6.0 * area)
    return abs(area), np.array([cx, cy])


def tile_surface(surface, tile_size):
    """
    把凸多边形剖分为边长 tile_size 的方形瓦片（边缘瓦片按多边形裁剪）

    网格从面内包围盒最小角起铺，u 轴取第一条边方向

    返回:
        (centers (k, 3), areas (k,))
    """
    pts = surface.points
    u = normalize(pts[1] - pts[0])
    v = np.cross(surface.normal, u)
    origin = pts[0]
    uv = np.stack([(pts - origin) @ u, (pts - origin) @ v], axis=1)
    lo, hi = uv.min(axis=0), uv.max(axis=0)
    nu = max(1, math.ceil((hi[0] - lo[0]) / tile_size - 1e-9))
    nv = max(1, math.ceil((hi[1] - lo[1]) / tile_size - 1e-9))

    polygon = [row for row in uv]
    centers, areas = [], []
    for i in range(nu):
        x0 = lo[0] + i * tile_size
        strip = _clip_convex(polygon, 0, x0, keep_less=False)
        strip = _clip_convex(strip, 0, x0 + tile_size, keep_less=True) if len(strip) >= 3 else []
        if len(strip) < 3:
            continue
        for j in range(nv):
            y0 = lo[1] + j * tile_size
            cell = _clip_convex(strip, 1, y0, keep_less=False)
            cell = _clip_convex(cell, 1, y0 + tile_size, keep_less=True) if len(cell) >= 3 else []
            if len(cell) < 3:
                continue
            area, c = _polygon_area_centroid(cell)
            if area <= 1e-12:
                continue
            centers.append(origin + c[0] * u + c[1] * v)
            areas.append(area)
    if not centers:
        return np.zeros((0, 3)), np.zeros(0)
    return np.array(centers), np.array(areas)
