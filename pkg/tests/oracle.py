# -*- coding: utf-8 -*-
"""
镜像法穷举参照实现

逐条枚举全部面序列（相邻面不同），不做剪枝、不做向量化，
只用于和追踪器的反射结果逐条比对；增益按闭式菲涅尔系数独立推进，不调用追踪器的电磁原语
"""

import itertools

import numpy as np

from railchan.config import OCCLUSION_EPS, SPEED_OF_LIGHT

EPS = OCCLUSION_EPS


def _plane(surface):
    n = np.asarray(surface.normal, dtype=float)
    return n, float(n @ surface.points.mean(axis=0))


def _inside(surface, point, tol=EPS):
    n, _ = _plane(surface)
    pts = surface.points
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        edge = b - a
        if np.cross(edge, point - a) @ n < -tol * np.linalg.norm(edge):
            return False
    return True


def _blocked(surfaces, a, b, exclude):
    for s in surfaces:
        if s.id in exclude or s.is_vegetation:
            continue
        n, off = _plane(s)
        ha, hb = n @ a - off, n @ b - off
        if min(ha, hb) > EPS or max(ha, hb) < -EPS:
            continue
        t = 0.5 if abs(ha - hb) < 1e-12 else ha / (ha - hb)
        t = min(max(t, 0.0), 1.0)
        if _inside(s, a + t * (b - a)):
            return True
    return False


def _specular_points(surfaces, seq, tx, rx):
    images = [np.asarray(tx, dtype=float)]
    for idx in seq:
        n, off = _plane(surfaces[idx])
        h = n @ images[-1] - off
        if h <= EPS:
            return None
        images.append(images[-1] - 2.0 * h * n)

    target = np.asarray(rx, dtype=float)
    points = []
    for j in range(len(seq) - 1, -1, -1):
        s = surfaces[seq[j]]
        n, off = _plane(s)
        image = images[j + 1]
        h_img, h_tgt = n @ image - off, n @ target - off
        if not (h_tgt > EPS and h_img < -EPS):
            return None
        t = h_img / (h_img - h_tgt)
        if not 0.0 < t < 1.0:
            return None
        hit = image + t * (target - image)
        if not _inside(s, hit):
            return None
        points.insert(0, hit)
        target = hit
    return points


def reflection_paths(surfaces, tx, rx, max_order):
    """
    穷举 0..max_order 阶镜面路径

    返回:
        {面编号元组: 折线顶点列表}，视距路径的键为空元组
    """
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    surfaces = [s for s in surfaces if not s.is_vegetation]
    found = {}
    if not _blocked(surfaces, tx, rx, set()):
        found[()] = [tx, rx]
    for order in range(1, max_order + 1):
        for seq in itertools.product(range(len(surfaces)), repeat=order):
            if any(seq[i] == seq[i + 1] for i in range(order - 1)):
                continue
            points = _specular_points(surfaces, seq, tx, rx)
            if points is None:
                continue
            chain = [tx] + points + [rx]
            ok = True
            for j in range(order + 1):
                exclude = set()
                if j > 0:
                    exclude.add(surfaces[seq[j - 1]].id)
                if j < order:
                    exclude.add(surfaces[seq[j]].id)
                if _blocked(surfaces, chain[j], chain[j + 1], exclude):
                    ok = False
                    break
            if ok:
                found[tuple(surfaces[i].id for i in seq)] = chain
    return found


def _unit(v):
    return v / np.linalg.norm(v)


def _basis(d):
    """波前平面上的 (v̂, ĥ)：v̂ 为竖直方向投影，ĥ 按水平分量定号"""
    z = np.array([0.0, 0.0, 1.0])
    ref = np.array([1.0, 0.0, 0.0]) if abs(d[2]) >= 1.0 - 1e-12 else z
    v = _unit(ref - (ref @ d) * d)
    h = _unit(np.cross(ref, d))
    sgn = np.sign(d[0]) if abs(d[0]) > 1e-12 else np.sign(d[1])
    if sgn == 0:
        sgn = 1.0
    return v, sgn * h


def _fresnel(eps, cos_i):
    sin2 = 1.0 - cos_i ** 2
    root = np.sqrt(complex(eps) - sin2)
    soft = (cos_i - root) / (cos_i + root)
    hard = (eps * cos_i - root) / (eps * cos_i + root)
    return soft, hard


def _reflect(field, k_in, k_out, normal, eps):
    """单次镜面反射：场分解到 ŝ、p̂ 分量后分别乘以菲涅尔系数"""
    cos_i = min(max(-(k_in @ normal), 0.0), 1.0)
    soft, hard = _fresnel(eps, cos_i)
    s = np.cross(k_in, normal)
    if np.linalg.norm(s) < 1e-12:
        ref = np.array([0.0, 0.0, 1.0]) if abs(normal[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
        s = np.cross(ref, normal)
    s = _unit(s)
    p_in = np.cross(k_in, s)
    p_out = np.cross(k_out, s)
    return soft * (s @ field) * s + hard * (p_in @ field) * p_out


def path_gain(scene, ids, chain, wavelength):
    """逐条路径按闭式菲涅尔系数推进两种发射极化的场，得到参照增益与时延"""
    pts = np.asarray(chain, dtype=float)
    seg = np.diff(pts, axis=0)
    lengths = np.linalg.norm(seg, axis=1)
    total = float(lengths.sum())
    u = seg / lengths[:, None]
    k = 2.0 * np.pi / wavelength
    scalar = wavelength / (4.0 * np.pi * total) * np.exp(-1j * k * total)

    tx_basis = _basis(u[0])
    rx_basis = _basis(-u[-1])
    gain = np.zeros((2, 2), dtype=complex)
    for col, launch in enumerate(tx_basis):
        field = launch.astype(complex)
        for j, ident in enumerate(ids):
            s = scene.surface(ident)
            field = _reflect(field, u[j], u[j + 1], np.asarray(s.normal, dtype=float),
                             s.material.permittivity)
        for row, receive in enumerate(rx_basis):
            gain[row, col] = scalar * (receive @ field)
    return gain, total / SPEED_OF_LIGHT
