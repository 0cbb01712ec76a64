# -*- coding: utf-8 -*-
"""
极化簿记模块
收发端 (V, H) 基、各作用的三维并矢以及 2×2 路径增益的合成

约定：
    v̂(d) 为全局竖直方向在波前平面上的投影；
    ĥ(d) 取 ẑ × d 并按 d 的水平分量定号，使 ĥ(−d) = ĥ(d)，
    因此视距路径的增益为 a·I，反转路径得到转置增益
"""

import numpy as np

from railchan.services.geometry import normalize

_Z = np.array([0.0, 0.0, 1.0])
_X = np.array([1.0, 0.0, 0.0])


def polarization_basis_batch(directions):
    """
    批量 (v̂, ĥ) 基

    参数:
        directions: (m, 3) 传播方向

    返回:
        (m, 3, 2)，最后一维依次为 v̂、ĥ
    """
    d = normalize(np.atleast_2d(directions))
    vertical = np.abs(d @ _Z) >= 1.0 - 1e-12
    ref = np.where(vertical[:, None], _X[None, :], _Z[None, :])
    v = normalize(ref - np.sum(ref * d, axis=1, keepdims=True) * d)
    h = normalize(np.cross(ref, d))
    sgn = np.where(np.abs(d[:, 0]) > 1e-12, np.sign(d[:, 0]), np.sign(d[:, 1]))
    sgn = np.where(sgn == 0, 1.0, sgn)
    return np.stack([v, sgn[:, None] * h], axis=2)


def polarization_basis(direction):
    """单个方向的 (v̂, ĥ) 基，3×2"""
    return polarization_basis_batch(np.asarray(direction, dtype=float)[None, :])[0]


def _fallback_soft(normals):
    # 正入射时 ŝ 只由法向决定
    ref = np.where((np.abs(normals[:, 2]) < 0.9)[:, None], _Z[None, :], _X[None, :])
    return normalize(np.cross(ref, normals))


def reflection_dyadic_batch(k_in, k_out, normals, gamma_soft, gamma_hard):
    """
    批量镜面反射并矢 R = γs·ŝŝᵀ + γh·p̂_r·p̂_iᵀ

    参数:
        k_in, k_out: (m, 3) 入射/反射方向
        normals: (m, 3) 或 (3,) 面法向
        gamma_soft, gamma_hard: (m,) 菲涅尔系数
    """
    ki = normalize(np.atleast_2d(k_in))
    kr = normalize(np.atleast_2d(k_out))
    n = np.broadcast_to(np.asarray(normals, dtype=float), ki.shape)
    s = np.cross(ki, n)
    degenerate = np.linalg.norm(s, axis=1) < 1e-12
    if degenerate.any():
        s[degenerate] = _fallback_soft(n[degenerate])
    s = normalize(s)
    p_i = np.cross(ki, s)
    p_r = np.cross(kr, s)
    gs = np.asarray(gamma_soft)[:, None, None]
    gh = np.asarray(gamma_hard)[:, None, None]
    return gs * np.einsum('mi,mj->mij', s, s) + gh * np.einsum('mi,mj->mij', p_r, p_i)


def reflection_dyadic(k_in, k_out, normal, gamma_soft, gamma_hard):
    """单条射线的反射并矢，收发互换后为转置"""
    return reflection_dyadic_batch(np.asarray(k_in, dtype=float)[None, :],
                                   np.asarray(k_out, dtype=float)[None, :],
                                   np.asarray(normal, dtype=float)[None, :],
                                   np.array([gamma_soft]), np.array([gamma_hard]))[0]


def diffraction_dyadic(edge_dir, s_in, s_out, d_soft, d_hard):
    """
    劈绕射并矢 T = −Ds·β̂0·β̂0'ᵀ − Dh·φ̂·φ̂'ᵀ

    参数:
        edge_dir: 棱方向单位向量
        s_in: 入射线方向（源 → 绕射点）
        s_out: 绕射线方向（绕射点 → 场点）
    """
    e = normalize(edge_dir)
    si = normalize(s_in)
    so = normalize(s_out)
    phi_in = -normalize(np.cross(e, si))
    beta_in = np.cross(phi_in, si)
    phi_out = normalize(np.cross(e, so))
    beta_out = np.cross(phi_out, so)
    return -d_soft * np.outer(beta_out, beta_in) - d_hard * np.outer(phi_out, phi_in)


def scattering_dyadic_batch(k_in, k_out, amplitude):
    """散射并矢：入射场投到入射波前、再投到出射波前"""
    ki = normalize(np.atleast_2d(k_in))
    ko = normalize(np.atleast_2d(k_out))
    eye = np.eye(3)[None, :, :]
    proj_in = eye - np.einsum('mi,mj->mij', ki, ki)
    proj_out = eye - np.einsum('mi,mj->mij', ko, ko)
    return np.asarray(amplitude)[:, None, None] * (proj_out @ proj_in)


def scattering_dyadic(k_in, k_out, amplitude):
    return scattering_dyadic_batch(np.asarray(k_in, dtype=float)[None, :],
                                   np.asarray(k_out, dtype=float)[None, :],
                                   np.array([amplitude]))[0]


def compose_gain_batch(scalar, first_directions, last_directions, dyadics=()):
    """
    批量合成 2×2 路径增益 G = scalar · B_rxᵀ · T_m⋯T_1 · B_tx

    参数:
        scalar: (m,) 标量传播因子
        first_directions / last_directions: (m, 3) 首段、末段传播方向
        dyadics: 按作用顺序排列的 (m, 3, 3) 并矢
    """
    b_tx = polarization_basis_batch(first_directions)
    b_rx = polarization_basis_batch(-np.atleast_2d(np.asarray(last_directions, dtype=float)))
    chain = b_tx.astype(complex)
    for t in dyadics:
        chain = t @ chain
    return np.asarray(scalar)[:, None, None] * (np.transpose(b_rx, (0, 2, 1)) @ chain)


def compose_gain(scalar, first_direction, last_direction, dyadics=()):
    """
    单条路径的 2×2 增益，行为接收极化 (V, H)，列为发射极化 (V, H)
    """
    return compose_gain_batch(np.array([scalar]),
                              np.asarray(first_direction, dtype=float)[None, :],
                              np.asarray(last_direction, dtype=float)[None, :],
                              [np.asarray(t)[None, :, :] for t in dyadics])[0]
