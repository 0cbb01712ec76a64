# -*- coding: utf-8 -*-
"""
确定性多径搜索模块
视距遮挡、镜像法多阶镜面反射、单次 UTD 劈绕射、单次定向散射

所有追踪函数既可单点调用，也可通过 TraceContext 对一批接收位置向量化计算；
场景只读共享，同一发射点的镜像序列在上下文内缓存
"""

import logging
import math
import threading

import numpy as np

from railchan.config import OCCLUSION_EPS, SPEED_OF_LIGHT
from railchan.errors import DomainError
from railchan.models.channel import Interaction, PropagationPath, TraceConfig
from railchan.services.em_core import fresnel, scatter_gain, utd_coefficient
from railchan.services.geometry import (
    OcclusionIndex, PolygonPack, VegetationIndex, direction_angles, normalize, tile_surface
)
from railchan.services.polarization import (
    compose_gain, compose_gain_batch, diffraction_dyadic, reflection_dyadic_batch,
    scattering_dyadic_batch
)

logger = logging.getLogger(__name__)

# 镜像序列按块验证，控制 序列 × 接收点 张量的大小
_SEQUENCE_BLOCK = 256
_EDGE_TOL = 1e-9


def snapshot_rng(seed, index):
    """快照随机数发生器，只由 (种子, 快照序号) 决定"""
    return np.random.default_rng((int(seed), int(index)))


def path_gain_db(path):
    p = path.power
    return 10.0 * math.log10(p) if p > 0 else float('-inf')


class TraceContext:
    """
    单个场景 + 追踪配置的预计算数据

    包括遮挡索引、植被体、反射面打包数组、面对互可见矩阵、散射瓦片和劈几何
    """

    def __init__(self, scene, cfg=None):
        self.scene = scene
        self.cfg = cfg or TraceConfig()
        self.k = self.cfg.wavenumber
        self.wavelength = self.cfg.wavelength
        self.eps = OCCLUSION_EPS
        self.occlusion = OcclusionIndex(scene.surfaces)
        vegetation = VegetationIndex(scene)
        self.vegetation = vegetation if (self.cfg.enable_vegetation and len(vegetation)) else None

        self.reflector_surfaces = [s for s in scene.surfaces if not s.is_vegetation]
        self.reflectors = PolygonPack(self.reflector_surfaces)
        self.permittivity = np.array([s.material.permittivity for s in self.reflector_surfaces], dtype=complex)
        self.can_follow = self._mutual_visibility()

        self._lock = threading.Lock()
        self._sequence_cache = {}
        self._tile_cache = None
        self._tx_tile_cache = {}
        self._wedge_cache = None

    # ---------- 预计算 ----------

    def _mutual_visibility(self):
        """can_follow[a, b]: 反射可由面 a 直接到达面 b（两面互在对方前方）"""
        pk = self.reflectors
        if len(pk) == 0:
            return np.zeros((0, 0), dtype=bool)
        height = np.einsum('ak,bvk->abv', pk.normals, pk.verts) - pk.offsets[:, None, None]
        front = np.any(height > self.eps, axis=2)      # front[a, b]: b 有顶点在 a 前方
        follow = front & front.T
        np.fill_diagonal(follow, False)
        return follow

    def reflection_sequences(self, tx, max_order):
        """
        发射点 tx 的候选反射面序列（按阶数分组）

        剪枝条件均为必要条件：相邻面不同、前一镜像在当前面前方、两面互在对方前方

        返回:
            {k: (seqs (Q, k) 行号, images (Q, k+1, 3))}
        """
        key = (tuple(np.round(np.asarray(tx, dtype=float), 12)), int(max_order))
        with self._lock:
            cached = self._sequence_cache.get(key)
        if cached is not None:
            return cached

        pk = self.reflectors
        out = {}
        tx = np.asarray(tx, dtype=float)
        if max_order >= 1 and len(pk):
            d0 = pk.normals @ tx - pk.offsets
            first = np.nonzero(d0 > self.eps)[0]
            seqs = first[:, None]
            images = np.stack([np.broadcast_to(tx, (len(first), 3)),
                               tx[None, :] - 2.0 * d0[first, None] * pk.normals[first]], axis=1)
            out[1] = (seqs, images)
            for order in range(2, max_order + 1):
                prev_seqs, prev_images = out[order - 1]
                if len(prev_seqs) == 0:
                    break
                last = prev_seqs[:, -1]
                image = prev_images[:, -1]
                height = image @ pk.normals.T - pk.offsets           # (Q, R)
                ok = (height > self.eps) & self.can_follow[last]
                q_idx, r_idx = np.nonzero(ok)
                new_images = image[q_idx] - 2.0 * height[q_idx, r_idx, None] * pk.normals[r_idx]
                seqs = np.concatenate([prev_seqs[q_idx], r_idx[:, None]], axis=1)
                images = np.concatenate([prev_images[q_idx], new_images[:, None, :]], axis=1)
                out[order] = (seqs, images)
                logger.debug("[镜像] %d 阶候选序列 %d 条", order, len(seqs))

        with self._lock:
            self._sequence_cache[key] = out
        return out

    def tiles(self):
        """
        全局瓦片表（按面顺序编号）

        返回:
            dict: centers, areas, rows（反射面行号）
        """
        with self._lock:
            if self._tile_cache is not None:
                return self._tile_cache
        centers, areas, rows = [], [], []
        for row, surface in enumerate(self.reflector_surfaces):
            c, a = tile_surface(surface, self.cfg.scatter_tile_size)
            centers.append(c)
            areas.append(a)
            rows.append(np.full(len(a), row, dtype=int))
        tiles = {
            "centers": np.concatenate(centers) if centers else np.zeros((0, 3)),
            "areas": np.concatenate(areas) if areas else np.zeros(0),
            "rows": np.concatenate(rows) if rows else np.zeros(0, dtype=int),
        }
        with self._lock:
            self._tile_cache = tiles
        return tiles

    @property
    def n_tiles(self):
        return len(self.tiles()["areas"])

    def _tx_visible_tiles(self, tx):
        """发射点可照射且未遮挡的散射瓦片下标"""
        key = tuple(np.round(np.asarray(tx, dtype=float), 12))
        with self._lock:
            cached = self._tx_tile_cache.get(key)
        if cached is not None:
            return cached
        tiles = self.tiles()
        pk = self.reflectors
        rows = tiles["rows"]
        scatter_s = np.array([s.material.scatter_s for s in self.reflector_surfaces])
        height = np.einsum('tk,tk->t', pk.normals[rows], np.asarray(tx)[None, :] - tiles["centers"])
        cand = np.nonzero((height > self.eps) & (scatter_s[rows] > 0))[0]
        starts = np.broadcast_to(np.asarray(tx, dtype=float), (len(cand), 3))
        blocked = self.occlusion.blocked_many(starts, tiles["centers"][cand], pk.ids[rows[cand]][:, None])
        visible = cand[~blocked]
        with self._lock:
            self._tx_tile_cache[key] = visible
        return visible

    def wedge_geometry(self):
        """参与绕射的劈（两面均非植被）的向量化几何"""
        with self._lock:
            if self._wedge_cache is not None:
                return self._wedge_cache
        wedges = []
        for w in self.scene.wedges:
            fa = self.scene.surface(w.face_a)
            fb = self.scene.surface(w.face_b)
            if fa.is_vegetation or fb.is_vegetation:
                continue
            wedges.append((w, fa))
        count = len(wedges)
        geo = {
            "wedges": [w for w, _ in wedges],
            "A": np.zeros((count, 3)), "e": np.zeros((count, 3)), "length": np.zeros(count),
            "n0": np.zeros((count, 3)), "t0": np.zeros((count, 3)), "n": np.zeros(count),
        }
        for i, (w, fa) in enumerate(wedges):
            a = np.asarray(w.edge[0], dtype=float)
            b = np.asarray(w.edge[1], dtype=float)
            length = float(np.linalg.norm(b - a))
            e = (b - a) / length
            t0 = normalize(np.cross(fa.normal, e))
            if (fa.centroid - a) @ t0 < 0:
                t0 = -t0
            geo["A"][i], geo["e"][i], geo["length"][i] = a, e, length
            geo["n0"][i], geo["t0"][i], geo["n"][i] = fa.normal, t0, w.n
        with self._lock:
            self._wedge_cache = geo
        return geo

    # ---------- 公共工具 ----------

    def vegetation_amplitude(self, points):
        """
        折线（批量）穿越植被的幅度因子

        参数:
            points: (m, p, 3) 折线顶点
        """
        pts = np.asarray(points, dtype=float)
        if self.vegetation is None:
            return np.ones(pts.shape[0])
        starts = pts[:, :-1].reshape(-1, 3)
        ends = pts[:, 1:].reshape(-1, 3)
        loss = self.vegetation.segment_loss_db(starts, ends).reshape(pts.shape[0], -1).sum(axis=1)
        return 10.0 ** (-loss / 20.0)

    def free_space_scalar(self, length):
        length = np.asarray(length, dtype=float)
        return self.wavelength / (4.0 * np.pi * length) * np.exp(-1j * self.k * length)


def _angles(direction):
    return direction_angles(direction)


def _make_path(chain, points, gain):
    """由折线顶点构造路径记录"""
    pts = np.asarray(points, dtype=float)
    seg = np.diff(pts, axis=0)
    length = float(np.linalg.norm(seg, axis=1).sum())
    return PropagationPath(
        mechanism_chain=tuple(chain),
        delay=length / SPEED_OF_LIGHT,
        length=length,
        aod=_angles(seg[0]),
        aoa=_angles(-seg[-1]),
        gain=np.asarray(gain, dtype=complex),
    )


def _context(scene, cfg, context):
    if context is not None:
        return context
    return TraceContext(scene, cfg)


# ---------- 视距 ----------

def trace_los_batch(ctx, tx, rx_positions):
    """批量视距：返回每个接收点的 LOS 路径或 None"""
    tx = np.asarray(tx, dtype=float)
    rx = np.atleast_2d(np.asarray(rx_positions, dtype=float))
    dist = np.linalg.norm(rx - tx, axis=1)
    if np.any(dist < 1e-12):
        raise DomainError("收发位置重合")
    starts = np.broadcast_to(tx, rx.shape)
    blocked = ctx.occlusion.blocked_many(starts, rx)
    out = [None] * len(rx)
    idx = np.nonzero(~blocked)[0]
    if len(idx) == 0:
        return out
    pts = np.stack([starts[idx], rx[idx]], axis=1)
    scalar = ctx.free_space_scalar(dist[idx]) * ctx.vegetation_amplitude(pts)
    d = rx[idx] - tx
    gains = compose_gain_batch(scalar, d, d)
    for j, m in enumerate(idx):
        out[m] = _make_path((), pts[j], gains[j])
    return out


def trace_los(scene, tx, rx, cfg=None, context=None):
    """
    视距路径

    参数:
        scene: Scene
        tx, rx: 收发位置

    返回:
        PropagationPath 或 None（被遮挡）
    """
    ctx = _context(scene, cfg, context)
    return trace_los_batch(ctx, tx, [rx])[0]


# ---------- 镜面反射 ----------

def _validate_block(ctx, seqs, images, rx):
    """
    对一块同阶序列和一批接收点做几何验证（由后向前逐面求镜面点）

    返回:
        (valid (Q, M), points (Q, M, k, 3))
    """
    pk = ctx.reflectors
    eps = ctx.eps
    q_count, order = seqs.shape
    m_count = len(rx)
    target = np.broadcast_to(rx[None, :, :], (q_count, m_count, 3))
    valid = np.ones((q_count, m_count), dtype=bool)
    points = np.zeros((q_count, m_count, order, 3))
    for j in range(order - 1, -1, -1):
        rows = seqs[:, j]
        n = pk.normals[rows]
        off = pk.offsets[rows]
        image = images[:, j + 1]
        d_img = np.einsum('qk,qk->q', n, image) - off
        d_tgt = np.einsum('qmk,qk->qm', target, n) - off[:, None]
        denom = d_img[:, None] - d_tgt
        t = d_img[:, None] / np.where(np.abs(denom) < 1e-15, 1.0, denom)
        valid &= (d_tgt > eps) & (d_img[:, None] < -eps) & (t > 0.0) & (t < 1.0)
        hit = image[:, None, :] + t[:, :, None] * (target - image[:, None, :])
        inside = pk.contains(np.repeat(rows, m_count), hit.reshape(-1, 3)).reshape(q_count, m_count)
        valid &= inside
        points[:, :, j] = hit
        target = hit
    return valid, points


def _reflection_paths(ctx, tx, rx, seqs, valid, points, per_rx):
    """为通过几何验证的 (序列, 接收点) 检查遮挡并计算增益"""
    pk = ctx.reflectors
    q_idx, m_idx = np.nonzero(valid)
    if len(q_idx) == 0:
        return
    order = seqs.shape[1]
    count = len(q_idx)
    chain_pts = np.empty((count, order + 2, 3))
    chain_pts[:, 0] = tx
    chain_pts[:, 1:-1] = points[q_idx, m_idx]
    chain_pts[:, -1] = rx[m_idx]

    surf_ids = pk.ids[seqs[q_idx]]                                  # (N, k)
    padded = np.concatenate([np.full((count, 1), -1), surf_ids, np.full((count, 1), -1)], axis=1)
    starts = chain_pts[:, :-1].reshape(-1, 3)
    ends = chain_pts[:, 1:].reshape(-1, 3)
    exclude = np.stack([padded[:, :-1], padded[:, 1:]], axis=2).reshape(-1, 2)
    blocked = ctx.occlusion.blocked_many(starts, ends, exclude).reshape(count, order + 1)
    keep = ~blocked.any(axis=1)
    if not keep.any():
        return
    chain_pts = chain_pts[keep]
    rows = seqs[q_idx[keep]]
    surf_ids = surf_ids[keep]
    m_idx = m_idx[keep]

    seg = np.diff(chain_pts, axis=1)
    seg_len = np.linalg.norm(seg, axis=2)
    u = seg / seg_len[:, :, None]
    total = seg_len.sum(axis=1)
    scalar = ctx.free_space_scalar(total) * ctx.vegetation_amplitude(chain_pts)

    dyadics = []
    for j in range(order):
        n = pk.normals[rows[:, j]]
        cos_i = np.clip(-np.einsum('nk,nk->n', u[:, j], n), 0.0, 1.0)
        theta = np.minimum(np.arccos(cos_i), np.pi / 2 - 1e-12)
        gs, gh = fresnel(ctx.permittivity[rows[:, j]], theta)
        dyadics.append(reflection_dyadic_batch(u[:, j], u[:, j + 1], n, np.atleast_1d(gs), np.atleast_1d(gh)))
    gains = compose_gain_batch(scalar, u[:, 0], u[:, -1], dyadics)

    for i in range(len(m_idx)):
        chain = tuple(Interaction("reflection", int(surf_ids[i, j]), tuple(map(float, chain_pts[i, j + 1])))
                      for j in range(order))
        per_rx[m_idx[i]].append(_make_path(chain, chain_pts[i], gains[i]))


def trace_reflections_batch(ctx, tx, rx_positions, max_order=None):
    """批量镜像法反射；返回每个接收点的路径列表"""
    tx = np.asarray(tx, dtype=float)
    rx = np.atleast_2d(np.asarray(rx_positions, dtype=float))
    max_order = ctx.cfg.max_reflection_order if max_order is None else max_order
    per_rx = [[] for _ in range(len(rx))]
    for order, (seqs, images) in sorted(ctx.reflection_sequences(tx, max_order).items()):
        for lo in range(0, len(seqs), _SEQUENCE_BLOCK):
            block_seqs = seqs[lo:lo + _SEQUENCE_BLOCK]
            valid, points = _validate_block(ctx, block_seqs, images[lo:lo + _SEQUENCE_BLOCK], rx)
            _reflection_paths(ctx, tx, rx, block_seqs, valid, points, per_rx)
    return per_rx


def trace_reflections(scene, tx, rx, cfg=None, context=None):
    """
    1..max_order 阶镜面反射路径（镜像法）

    增益 = 自由空间(总长) × 各次菲涅尔并矢（含局部极化基旋转）× 植被衰减
    """
    ctx = _context(scene, cfg, context)
    return trace_reflections_batch(ctx, tx, [rx])[0]


# ---------- 绕射 ----------

def _wedge_angle(d, n0, t0):
    """相对 o 面的方位角，取值 [0, 2π)"""
    phi = np.arctan2(np.einsum('wk,wk->w', d, n0), np.einsum('wk,wk->w', d, t0))
    return np.where(phi < 0, phi + 2 * np.pi, phi)


def _diffraction_for_rx(ctx, tx, rx, geo):
    wedges = geo["wedges"]
    if not wedges:
        return []
    A, e, length = geo["A"], geo["e"], geo["length"]
    u_t = np.einsum('wk,wk->w', tx[None, :] - A, e)
    u_r = np.einsum('wk,wk->w', rx[None, :] - A, e)
    rho_t = np.linalg.norm(tx[None, :] - A - u_t[:, None] * e, axis=1)
    rho_r = np.linalg.norm(rx[None, :] - A - u_r[:, None] * e, axis=1)
    ok = (rho_t > _EDGE_TOL) & (rho_r > _EDGE_TOL)
    u = (u_t * rho_r + u_r * rho_t) / np.where(ok, rho_t + rho_r, 1.0)
    ok &= (u > _EDGE_TOL) & (u < length - _EDGE_TOL)
    q = A + u[:, None] * e
    phi_p = _wedge_angle(tx[None, :] - q, geo["n0"], geo["t0"])
    phi = _wedge_angle(rx[None, :] - q, geo["n0"], geo["t0"])
    wedge_max = geo["n"] * np.pi + 1e-9
    ok &= (phi_p <= wedge_max) & (phi <= wedge_max)
    idx = np.nonzero(ok)[0]
    if len(idx) == 0:
        return []

    faces = np.array([[wedges[i].face_a, wedges[i].face_b] for i in idx])
    starts = np.concatenate([np.broadcast_to(tx, (len(idx), 3)), q[idx]])
    ends = np.concatenate([q[idx], np.broadcast_to(rx, (len(idx), 3))])
    blocked = ctx.occlusion.blocked_many(starts, ends, np.concatenate([faces, faces]))
    blocked = blocked[:len(idx)] | blocked[len(idx):]

    paths = []
    for j, i in enumerate(idx):
        if blocked[j]:
            continue
        point = q[i]
        s_in = point - tx
        s_out = rx - point
        sp = float(np.linalg.norm(s_in))
        s = float(np.linalg.norm(s_out))
        beta0 = math.acos(max(-1.0, min(1.0, float(s_in @ e[i]) / sp)))
        beta0_d = math.acos(max(-1.0, min(1.0, float(s_out @ e[i]) / s)))
        try:
            d = utd_coefficient(geo["n"][i], ctx.k, beta0, float(phi[i]), float(phi_p[i]), sp, s, beta0_d)
        except DomainError as err:
            logger.debug("[绕射] 劈 %d 跳过: %s", wedges[i].id, err)
            continue
        spread = math.sqrt(sp / (s * (sp + s)))
        scalar = ctx.wavelength / (4 * math.pi) * np.exp(-1j * ctx.k * (sp + s)) / sp * spread
        pts = np.stack([tx, point, rx])
        scalar = scalar * ctx.vegetation_amplitude(pts[None])[0]
        t = diffraction_dyadic(e[i], s_in, s_out, d[0, 0], d[1, 1])
        gain = compose_gain(scalar, s_in, s_out, [t])
        chain = (Interaction("diffraction", wedges[i].id, tuple(map(float, point))),)
        paths.append(_make_path(chain, pts, gain))
    return paths


def trace_diffraction_batch(ctx, tx, rx_positions):
    tx = np.asarray(tx, dtype=float)
    geo = ctx.wedge_geometry()
    return [_diffraction_for_rx(ctx, tx, np.asarray(r, dtype=float), geo)
            for r in np.atleast_2d(np.asarray(rx_positions, dtype=float))]


def trace_diffraction(scene, tx, rx, wedges=None, cfg=None, context=None):
    """
    单次劈绕射路径

    参数:
        wedges: 只考虑这些劈（默认场景全部劈）

    返回:
        list[PropagationPath]
    """
    ctx = _context(scene, cfg, context)
    paths = trace_diffraction_batch(ctx, tx, [rx])[0]
    if wedges is not None:
        wanted = {w.id for w in wedges}
        paths = [p for p in paths if p.mechanism_chain[0].element_id in wanted]
    return paths


# ---------- 散射 ----------

def _scattering_for_rx(ctx, tx, rx, phases):
    tiles = ctx.tiles()
    visible = ctx._tx_visible_tiles(tx)
    if len(visible) == 0:
        return []
    pk = ctx.reflectors
    rows = tiles["rows"][visible]
    centers = tiles["centers"][visible]
    normals = pk.normals[rows]
    height = np.einsum('tk,tk->t', normals, rx[None, :] - centers)
    front = height > ctx.eps
    visible, rows, centers, normals = visible[front], rows[front], centers[front], normals[front]
    if len(visible) == 0:
        return []
    blocked = ctx.occlusion.blocked_many(centers, np.broadcast_to(rx, centers.shape), pk.ids[rows][:, None])
    keep = ~blocked
    visible, rows, centers, normals = visible[keep], rows[keep], centers[keep], normals[keep]
    if len(visible) == 0:
        return []

    v_in = centers - tx
    v_out = rx - centers
    r_i = np.linalg.norm(v_in, axis=1)
    r_s = np.linalg.norm(v_out, axis=1)
    k_in = v_in / r_i[:, None]
    k_out = v_out / r_s[:, None]
    cos_i = np.clip(-np.einsum('tk,tk->t', k_in, normals), 0.0, 1.0)
    cos_s = np.clip(np.einsum('tk,tk->t', k_out, normals), 0.0, 1.0)
    specular = k_in - 2.0 * np.einsum('tk,tk->t', k_in, normals)[:, None] * normals
    psi = np.arccos(np.clip(np.einsum('tk,tk->t', specular, k_out), -1.0, 1.0))

    materials = [ctx.reflector_surfaces[r].material for r in rows]
    scatter_s = np.array([m.scatter_s for m in materials])
    alpha = np.array([m.scatter_alpha for m in materials], dtype=float)
    amp = scatter_gain(np.arccos(cos_i), psi, scatter_s, alpha, tiles["areas"][visible], r_i, r_s, ctx.k,
                       theta_s=np.arccos(cos_s), phase=phases[visible])
    amp = np.atleast_1d(amp)
    pts = np.stack([np.broadcast_to(tx, centers.shape), centers, np.broadcast_to(rx, centers.shape)], axis=1)
    amp = amp * ctx.vegetation_amplitude(pts)
    gains = compose_gain_batch(np.ones(len(amp)), k_in, k_out, [scattering_dyadic_batch(k_in, k_out, amp)])

    power_db = 10.0 * np.log10(np.maximum(np.sum(np.abs(gains) ** 2, axis=(1, 2)) / 2.0, 1e-300))
    paths = []
    for i in np.nonzero(power_db >= ctx.cfg.min_path_gain_db)[0]:
        chain = (Interaction("scattering", int(pk.ids[rows[i]]), tuple(map(float, centers[i])), int(visible[i])),)
        paths.append(_make_path(chain, pts[i], gains[i]))
    return paths


def tile_phases(ctx, rng):
    """按瓦片编号顺序为全部瓦片抽取均匀随机相位"""
    return rng.uniform(0.0, 2.0 * np.pi, size=ctx.n_tiles)


def trace_scattering_batch(ctx, tx, rx_positions, rngs):
    tx = np.asarray(tx, dtype=float)
    rx = np.atleast_2d(np.asarray(rx_positions, dtype=float))
    return [_scattering_for_rx(ctx, tx, r, tile_phases(ctx, g)) for r, g in zip(rx, rngs)]


def trace_scattering(scene, tx, rx, cfg=None, rng=None, context=None):
    """
    单次定向散射路径：每个收发双向可见的瓦片一条，瓦片中心为作用点

    参数:
        rng: 快照随机数发生器（默认种子 0、快照 0）
    """
    ctx = _context(scene, cfg, context)
    return trace_scattering_batch(ctx, tx, [rx], [rng if rng is not None else snapshot_rng(0, 0)])[0]


# ---------- 汇总 ----------

def finalize_paths(paths, min_path_gain_db):
    """去重（按作用链）、按门限剔除、按 (时延, 作用链) 规范排序"""
    seen = set()
    out = []
    for path in paths:
        ident = path.identity
        if ident in seen:
            continue
        seen.add(ident)
        if path_gain_db(path) < min_path_gain_db:
            continue
        out.append(path)
    out.sort(key=lambda p: p.canonical_key)
    return out


def trace_batch(ctx, tx, rx_positions, rngs):
    """
    一批接收点的全部机制路径

    参数:
        ctx: TraceContext
        rngs: 每个接收点对应的快照随机数发生器

    返回:
        list[list[PropagationPath]]
    """
    cfg = ctx.cfg
    rx = np.atleast_2d(np.asarray(rx_positions, dtype=float))
    los = trace_los_batch(ctx, tx, rx)
    refl = trace_reflections_batch(ctx, tx, rx)
    diff = trace_diffraction_batch(ctx, tx, rx) if cfg.enable_diffraction else [[] for _ in rx]
    scat = trace_scattering_batch(ctx, tx, rx, rngs) if cfg.enable_scattering else [[] for _ in rx]
    results = []
    for i in range(len(rx)):
        paths = ([los[i]] if los[i] is not None else []) + refl[i] + diff[i] + scat[i]
        results.append(finalize_paths(paths, cfg.min_path_gain_db))
    return results


def trace_all(scene, tx, rx, cfg=None, rng=None, context=None):
    """
    四种机制的并集，去重并按规范键排序；给定 (场景, 收发点, 配置, 随机种子) 结果确定
    """
    ctx = _context(scene, cfg, context)
    return trace_batch(ctx, tx, [rx], [rng if rng is not None else snapshot_rng(0, 0)])[0]
