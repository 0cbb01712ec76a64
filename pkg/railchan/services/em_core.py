# -*- coding: utf-8 -*-
"""
电磁基础模块
菲涅尔反射、UTD 劈绕射系数、单瓣定向散射、植被衰减、自由空间传播

时谐约定统一为 e^{+jωt}：复介电常数 ε = ε' − jε''，传播相位 e^{−jkr}
所有系数在中心频率处计算，逐频点相位在信道模块中施加
"""

import numpy as np
import scipy.special

from railchan.config import SPEED_OF_LIGHT, KELLER_CONE_TOL
from railchan.errors import DomainError

# cot·F 乘积在阴影边界附近改用渐近式的阈值
_BOUNDARY_TOL = 1e-9


def complex_permittivity(eps_r, tan_delta):
    """ε = ε'_r · (1 − j·tanδ)"""
    return complex(eps_r, -eps_r * tan_delta)


def wavenumber(f):
    return 2.0 * np.pi * f / SPEED_OF_LIGHT


def fresnel(eps, theta_i):
    """
    空气→半无限介质的菲涅尔幅度反射系数

    参数:
        eps: 复相对介电常数，可与 theta_i 同形状的数组
        theta_i: 入射角（相对面法线，rad），可为数组

    返回:
        (gamma_soft, gamma_hard): 垂直极化(⟂)、平行极化(∥) 反射系数
    """
    theta = np.asarray(theta_i, dtype=float)
    if np.any(~np.isfinite(theta)) or np.any(theta < 0) or np.any(theta >= np.pi / 2):
        raise DomainError(f"入射角必须在 [0, π/2) 内: {theta_i}")

    eps = np.asarray(eps, dtype=complex)
    cos_t = np.cos(theta)
    root = np.sqrt(eps - np.sin(theta) ** 2 + 0j)
    gamma_soft = (cos_t - root) / (cos_t + root)
    gamma_hard = (eps * cos_t - root) / (eps * cos_t + root)
    if gamma_soft.ndim == 0:
        return complex(gamma_soft), complex(gamma_hard)
    return gamma_soft, gamma_hard


def transition_function(x):
    """
    Kouyoumjian–Pathak 过渡函数
    F(x) = 2j·√x·e^{jx}·∫_{√x}^{∞} e^{−jτ²} dτ
    """
    x = np.asarray(x, dtype=float)
    sqrt_x = np.sqrt(np.maximum(x, 0.0))
    fm = scipy.special.modfresnelm(sqrt_x)[0]
    return 2j * sqrt_x * np.exp(1j * x) * fm


def _cot_f(n, k, L, beta, sign):
    """
    cot((π + sign·β)/2n) · F(kL·a^{sign}(β))，在阴影/反射边界处取渐近极限
    """
    arg = np.pi + sign * beta
    period = 2.0 * np.pi * n
    eps = arg - period * np.round(arg / period)

    big_n = np.round((beta + sign * np.pi) / period)
    a = 2.0 * np.cos((period * big_n - beta) / 2.0) ** 2

    if abs(eps) < _BOUNDARY_TOL:
        sgn = 1.0 if eps >= 0 else -1.0
        return n * (np.sqrt(2 * np.pi * k * L) * sgn - 2 * k * L * eps * np.exp(1j * np.pi / 4)) \
            * np.exp(1j * np.pi / 4)
    return complex(1.0 / np.tan(arg / (2.0 * n)) * transition_function(k * L * a))


def utd_terms(n, k, beta0, phi, phi_p, s_p, s):
    """
    UTD 系数的两组分量

    返回:
        (d_diff, d_sum): 分别对应 φ−φ' 项与 φ+φ' 项（已含公共前因子）
        软/硬系数 D_s = d_diff − d_sum，D_h = d_diff + d_sum
    """
    L = s * s_p / (s + s_p) * np.sin(beta0) ** 2
    pre = -np.exp(-1j * np.pi / 4) / (2.0 * n * np.sqrt(2.0 * np.pi * k) * np.sin(beta0))
    beta_minus = phi - phi_p
    beta_plus = phi + phi_p
    d_diff = pre * (_cot_f(n, k, L, beta_minus, +1) + _cot_f(n, k, L, beta_minus, -1))
    d_sum = pre * (_cot_f(n, k, L, beta_plus, +1) + _cot_f(n, k, L, beta_plus, -1))
    return d_diff, d_sum


def utd_coefficient(n, k, beta0, phi, phi_p, s_p, s, beta0_d=None):
    """
    理想导体直劈的 UTD 绕射系数（劈固定基下的对角并矢）

    参数:
        n: 外角 nπ 的 n，1 < n ≤ 2（n = 2 为半平面）
        k: 波数 (1/m)
        beta0: 入射线与棱的夹角 (rad)
        phi, phi_p: 绕射线、入射线相对 o 面的角度 (rad)
        s_p, s: 源到绕射点、绕射点到观察点距离 (m)
        beta0_d: 绕射线与棱的夹角；给出时校验 Keller 锥条件

    返回:
        np.ndarray: diag(D_s, D_h)，单位 √m
    """
    if not 1.0 < n <= 2.0:
        raise DomainError(f"劈外角参数 n 必须在 (1, 2] 内: {n}")
    if not (s_p > 0 and s > 0):
        raise DomainError("源或观察点位于棱上（距离为 0）")
    if k <= 0:
        raise DomainError("波数必须为正")
    if abs(np.sin(beta0)) < 1e-12:
        raise DomainError("入射线平行于棱，Keller 锥退化")
    if beta0_d is not None and abs(beta0_d - beta0) > KELLER_CONE_TOL:
        raise DomainError(f"不满足 Keller 锥条件: β0={beta0}, β0'={beta0_d}")

    d_diff, d_sum = utd_terms(n, k, beta0, phi, phi_p, s_p, s)
    return np.diag([d_diff - d_sum, d_diff + d_sum]).astype(complex)


def diffraction_spreading(s_p, s):
    """球面波入射直劈的扩散因子 A(s', s) = √(s'/(s(s'+s)))"""
    return np.sqrt(s_p / (s * (s_p + s)))


def lobe_pattern(psi_r, alpha_r):
    """单瓣方向图 ((1 + cosψ_R)/2)^α_R"""
    return ((1.0 + np.cos(psi_r)) / 2.0) ** alpha_r


def scatter_gain(theta_i, psi_r, S, alpha_R, tile_area, r_i, r_s, k,
                 rng=None, theta_s=None, phase=None):
    """
    单瓣定向散射模型的幅度

    |a|² = S²·A·cosθ·(α+1)·((1+cosψ_R)/2)^α · λ² / ((4π)³·r_i²·r_s²)
    方向图在全空间积分归一化，使散射功率恰为入射功率的 S² 部分。
    给出 theta_s 时投影面积因子取 √(cosθ_i·cosθ_s)，保证收发互易

    参数:
        theta_i: 入射角 (rad)
        psi_r: 散射方向与镜面方向夹角 (rad)
        S, alpha_R: 散射系数与瓣指数
        tile_area: 瓦片面积 (m²)
        r_i, r_s: 瓦片到发射端/接收端距离 (m)
        k: 波数
        rng: 随机数发生器，用于均匀随机相位
        theta_s: 出射角 (rad)，可选
        phase: 直接给定的随机相位（优先于 rng）
    """
    r_i = np.asarray(r_i, dtype=float)
    r_s = np.asarray(r_s, dtype=float)
    area = np.asarray(tile_area, dtype=float)
    if np.any(r_i <= 0) or np.any(r_s <= 0):
        raise DomainError("散射距离必须为正")
    if np.any(area <= 0):
        raise DomainError("瓦片面积必须为正")

    cos_i = np.clip(np.cos(theta_i), 0.0, None)
    if theta_s is not None:
        cos_fac = np.sqrt(cos_i * np.clip(np.cos(theta_s), 0.0, None))
    else:
        cos_fac = cos_i
    lam = 2.0 * np.pi / k
    power = (S ** 2 * area * cos_fac * (alpha_R + 1) * lobe_pattern(psi_r, alpha_R)
             * lam ** 2 / ((4 * np.pi) ** 3 * r_i ** 2 * r_s ** 2))

    if phase is None:
        phase = rng.uniform(0.0, 2.0 * np.pi, size=np.shape(power)) if rng is not None else 0.0
    amp = np.sqrt(power) * np.exp(1j * (-k * (r_i + r_s) + phase))
    if np.ndim(amp) == 0:
        return complex(amp)
    return amp


def vegetation_loss(length_m, veg_atten):
    """植被穿越损耗 (dB) = 比衰减 × 穿越长度"""
    if np.any(np.asarray(length_m) < 0):
        raise DomainError("植被穿越长度不能为负")
    return veg_atten * length_m


def free_space_gain(d, f):
    """
    自由空间复幅度增益 λ/(4πd)·e^{−jkd}

    参数:
        d: 距离 (m)
        f: 频率 (Hz)
    """
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr <= 0):
        raise DomainError(f"距离必须为正: {d}")
    if f <= 0:
        raise DomainError(f"频率必须为正: {f}")
    lam = SPEED_OF_LIGHT / f
    g = lam / (4 * np.pi * d_arr) * np.exp(-1j * 2 * np.pi / lam * d_arr)
    if g.ndim == 0:
        return complex(g)
    return g


def free_space_loss_db(d, f):
    """自由空间路径损耗 20·log10(4πd/λ)"""
    return -20.0 * np.log10(np.abs(free_space_gain(d, f)))
