# -*- coding: utf-8 -*-
"""
信道合成模块
轨迹扫描、宽带 CTF 组装、CIR/PDP、窄带增益、逐径多普勒、天线方向图后处理
"""

import dataclasses
import logging
import math

import numpy as np
from scipy.signal import windows

from railchan.config import DEFAULT_ANALYSIS_POL, POLARIZATIONS, SPEED_OF_LIGHT, SWEEP_CHUNK_SIZE
from railchan.errors import DomainError
from railchan.models.channel import CIR, CTF, ChannelSnapshot, PowerDelayProfile
from railchan.services.tracer import TraceContext, snapshot_rng, trace_batch
from railchan.services.workers import ordered_map

logger = logging.getLogger(__name__)

CIR_WINDOWS = ("rect", "hann")


def _pol_index(pol):
    try:
        return POLARIZATIONS.index(pol)
    except ValueError:
        raise DomainError(f"未知极化组合: {pol}") from None


def sweep(scene, tx, traj, cfg=None, seed=0, jobs=1, context=None):
    """
    沿轨迹逐点追踪

    接收点按块分给线程池，结果严格按快照序号产出；
    每个快照的散射相位只由 (seed, 序号) 决定，与块划分和线程数无关

    参数:
        scene: Scene
        tx: 发射点
        traj: TrajectorySpec
        cfg: TraceConfig
        seed: 随机种子
        jobs: 并行线程数
        context: 可复用的 TraceContext

    返回:
        生成器，依次产出 ChannelSnapshot
    """
    ctx = context or TraceContext(scene, cfg)
    positions = traj.positions()
    time_step = traj.time_step
    lo, hi = scene.bounding_box
    margin = 1e-6
    outside = np.any((positions < lo - margin) | (positions > hi + margin), axis=1)
    if outside.any():
        logger.warning("[扫描] %d 个采样点位于场景包围盒外，已标记", int(outside.sum()))

    chunks = [np.arange(start, min(start + SWEEP_CHUNK_SIZE, len(positions)))
              for start in range(0, len(positions), SWEEP_CHUNK_SIZE)]

    def run_chunk(indices):
        rngs = [snapshot_rng(seed, i) for i in indices]
        return trace_batch(ctx, tx, positions[indices], rngs)

    # 每批 chunk 数与线程数相当，避免一次性持有全部结果
    batch = max(1, int(jobs or 1)) * 2
    for b in range(0, len(chunks), batch):
        group = chunks[b:b + batch]
        for indices, results in zip(group, ordered_map(run_chunk, group, jobs)):
            for i, paths in zip(indices, results):
                yield ChannelSnapshot(
                    index=int(i),
                    rx_position=tuple(map(float, positions[i])),
                    time_s=float(i * time_step),
                    paths=tuple(paths),
                    flagged=bool(outside[i]),
                )
        logger.debug("[扫描] 已完成 %d / %d 个快照",
                     min((b + batch) * SWEEP_CHUNK_SIZE, len(positions)), len(positions))


def _paths_of(snapshot_or_paths):
    if isinstance(snapshot_or_paths, ChannelSnapshot):
        return snapshot_or_paths.paths
    return tuple(snapshot_or_paths)


def assemble_ctf(snapshot, band):
    """
    组装宽带 CTF

    H(f_i, pol) = Σ_p g_p[pol] · e^{−j2π(f_i − f_c)τ_p}，τ_p 为绝对时延，
    因此 H 对路径集合严格线性；作用系数固定在中心频率，逐频点只施加时延相位。
    最早路径时延记为 delay_origin，仅供 ctf_to_cir 对齐时延轴

    参数:
        snapshot: ChannelSnapshot 或路径列表
        band: BandSpec

    返回:
        CTF（列顺序 VV, VH, HV, HH）
    """
    paths = _paths_of(snapshot)
    n = band.n_points
    if not paths:
        return CTF(np.zeros((n, len(POLARIZATIONS)), dtype=complex), band, 0.0)

    delays = np.array([p.delay for p in paths])
    origin = float(delays.min())
    offsets = band.frequencies - band.f_center
    gains = np.array([[p.pol_gain(pol) for pol in POLARIZATIONS] for p in paths])   # (P, 4)
    phase = np.exp(-2j * np.pi * np.outer(offsets, delays))    # (n, P)
    return CTF(phase @ gains, band, origin)


def _window(name, n):
    if name == "rect":
        return np.ones(n)
    if name == "hann":
        w = windows.hann(n, sym=True)
        # 归一化到单位平均功率
        return w / np.sqrt(np.mean(w ** 2))
    raise DomainError(f"未知窗函数: {name}，可选 {', '.join(CIR_WINDOWS)}")


def ctf_to_cir(ctf, window="rect"):
    """
    CTF → CIR（逐极化列做逆离散变换）

    先按 τ_0 = delay_origin 去除公共时延相位，时延轴 τ_n = τ_0 + n / (N·Δf)，跨度 1/Δf。
    矩形窗对任意信道满足 Σ|h|² = mean(|H|²)；汉宁窗归一化为单位平均功率，
    该等式只对单径（|H| 平坦）信道成立，多径时随 |H| 的频率起伏偏离
    """
    H = np.asarray(ctf.H)
    n = H.shape[0]
    w = _window(window, n)
    offsets = ctf.band.frequencies - ctf.band.f_center
    aligned = H * np.exp(2j * np.pi * offsets * ctf.delay_origin)[:, None]
    taps = np.fft.ifft(aligned * w[:, None], axis=0)
    delays = ctf.delay_origin + np.arange(n) / (n * ctf.band.spacing)
    return CIR(taps, delays, ctf.band)


def pdp(cir, pol=DEFAULT_ANALYSIS_POL):
    """CIR 指定极化列的功率时延谱，分辨率 1/带宽"""
    col = _pol_index(pol)
    powers = np.abs(cir.taps[:, col]) ** 2
    return PowerDelayProfile(
        delays=np.asarray(cir.delays, dtype=float),
        powers=powers,
        polarization=pol,
        resolution=1.0 / cir.band.bandwidth,
        metadata={"delay_origin": float(cir.delays[0]) if len(cir.delays) else 0.0},
    )


def path_pdp(paths, pol=DEFAULT_ANALYSIS_POL):
    """离散路径的功率时延谱（每条路径一个抽头，不做带宽限制）"""
    paths = _paths_of(paths)
    delays = np.array([p.delay for p in paths], dtype=float)
    powers = np.array([abs(p.pol_gain(pol)) ** 2 for p in paths], dtype=float)
    return PowerDelayProfile(delays=delays, powers=powers, polarization=pol)


def narrowband_gain(snapshot, f_center=None, reference_frequency=None):
    """
    窄带复增益 Σ_p g_p，按极化返回

    参数:
        f_center: 目标频率；与 reference_frequency（增益计算频率）同时给出时补偿时延相位
    """
    paths = _paths_of(snapshot)
    shift = 0.0
    if f_center is not None and reference_frequency is not None:
        shift = f_center - reference_frequency
    out = {}
    for pol in POLARIZATIONS:
        total = 0j
        for p in paths:
            g = p.pol_gain(pol)
            if shift:
                g = g * np.exp(-2j * np.pi * shift * p.delay)
            total += complex(g)
        out[pol] = total
    return out


def angles_to_direction(az_deg, el_deg):
    az = math.radians(az_deg)
    el = math.radians(el_deg)
    return np.array([math.cos(el) * math.cos(az), math.cos(el) * math.sin(az), math.sin(el)])


def doppler(path, traj, f_center):
    """
    逐径多普勒频移 f_d = (v/λ)·cos(速度与到达方向夹角)

    到达方向指向来波（从接收端看向最后一个作用点），迎面来波为正
    """
    if not f_center > 0:
        raise DomainError("频率必须为正")
    wavelength = SPEED_OF_LIGHT / f_center
    arrival = angles_to_direction(*path.aoa)
    return float(traj.speed / wavelength * (traj.unit_direction @ arrival))


def apply_antenna_pattern(paths, tx_pattern=None, rx_pattern=None):
    """
    按天线方向图缩放每条路径

    参数:
        tx_pattern / rx_pattern: 函数 (方位角, 俯仰角) → 增益 dBi，None 表示全向 0 dBi

    返回:
        list[PropagationPath]
    """
    out = []
    for p in _paths_of(paths):
        g_db = 0.0
        if tx_pattern is not None:
            g_db += float(tx_pattern(*p.aod))
        if rx_pattern is not None:
            g_db += float(rx_pattern(*p.aoa))
        if g_db == 0.0:
            out.append(p)
            continue
        out.append(dataclasses.replace(p, gain=p.gain * 10.0 ** (g_db / 20.0)))
    return out
