# -*- coding: utf-8 -*-
"""
大小尺度衰落分离
滑动重叠窗在线性功率域平均，窗长 20λ、步长 10λ
"""

import logging

import numpy as np

from railchan.config import FADING_STEP_WAVELENGTHS, FADING_WINDOW_WAVELENGTHS
from railchan.errors import DomainError
from railchan.models.stats import FadingDecomposition

logger = logging.getLogger(__name__)


def window_samples(wavelength, sample_interval, n_wavelengths=FADING_WINDOW_WAVELENGTHS):
    """窗长对应的采样点数（四舍五入）"""
    if not (wavelength > 0 and sample_interval > 0):
        raise DomainError("波长和采样间隔必须为正")
    return int(round(n_wavelengths * wavelength / sample_interval))


def track_coordinate(positions):
    """
    采样位置 → 一维沿线坐标

    一维输入原样返回；三维输入取相对首点的累计弧长
    """
    pos = np.asarray(positions, dtype=float)
    if pos.ndim == 1:
        return pos
    steps = np.linalg.norm(np.diff(pos, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(steps)])


def separate_fading(gain_trace, positions, wavelength,
                    window_wl=FADING_WINDOW_WAVELENGTHS, step_wl=FADING_STEP_WAVELENGTHS):
    """
    分离大尺度与小尺度衰落

    参数:
        gain_trace: 逐快照复增益（或包络）
        positions: 采样位置（一维坐标或三维点）
        wavelength: 波长 (m)
        window_wl / step_wl: 窗长、步长（以波长计）

    返回:
        FadingDecomposition: 大尺度为窗中心处平均功率 (dB)，
        小尺度为瞬时包络 / 插值后的大尺度包络
    """
    env = np.abs(np.asarray(gain_trace))
    x = track_coordinate(positions)
    if len(x) != len(env):
        raise DomainError("增益序列与位置数量不一致")
    if not wavelength > 0:
        raise DomainError("波长必须为正")
    order = np.argsort(x, kind='stable')
    x, env = x[order], env[order]

    window = window_wl * wavelength
    step = step_wl * wavelength
    span = x[-1] - x[0] if len(x) else 0.0
    if span < window * (1.0 - 1e-9):
        raise DomainError(f"序列跨度 {span:.6g} m 小于窗长 {window:.6g} m")

    n_centers = int(np.floor(span / step + 1e-9)) + 1
    centers = x[0] + step * np.arange(n_centers)
    power = env ** 2
    # 窗边界用前缀和定位，边缘窗自然截断
    cum = np.concatenate([[0.0], np.cumsum(power)])
    lo = np.searchsorted(x, centers - window / 2.0 - 1e-12, side='left')
    hi = np.searchsorted(x, centers + window / 2.0 + 1e-12, side='right')
    mean_power = (cum[hi] - cum[lo]) / np.maximum(hi - lo, 1)
    if np.any(mean_power <= 0):
        raise DomainError("存在平均功率为 0 的窗")
    large_db = 10.0 * np.log10(mean_power)

    interp_db = np.interp(x, centers, large_db)
    small = env / 10.0 ** (interp_db / 20.0)
    logger.debug("[衰落分离] %d 个采样点, %d 个窗", len(x), n_centers)
    return FadingDecomposition(
        centers=centers,
        large_scale_db=large_db,
        positions=x,
        large_scale_interp_db=interp_db,
        small_scale=small,
    )
