# -*- coding: utf-8 -*-
"""
传播路径与信道数据模型
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from railchan.config import (
    SPEED_OF_LIGHT, MAX_REFLECTION_ORDER_LIMIT, DEFAULT_MAX_REFLECTION_ORDER,
    DEFAULT_SCATTER_TILE_SIZE, DEFAULT_MIN_PATH_GAIN_DB, BASELINE_F_CENTER,
    POLARIZATIONS
)
from railchan.errors import ValidationError

INTERACTION_KINDS = ("reflection", "diffraction", "scattering")
_KIND_CODES = {"reflection": "R", "diffraction": "D", "scattering": "S"}
_CODE_KINDS = {v: k for k, v in _KIND_CODES.items()}


@dataclass(frozen=True)
class Interaction:
    """
    单次作用

    字段:
        kind: reflection / diffraction / scattering
        element_id: 面编号（反射、散射）或劈编号（绕射）
        point: 作用点坐标
        tile: 散射瓦片序号（其余机制为 -1）
    """
    kind: str
    element_id: int
    point: Tuple[float, float, float]
    tile: int = -1

    @property
    def code(self):
        text = f"{_KIND_CODES[self.kind]}{self.element_id}"
        if self.tile >= 0:
            text += f":{self.tile}"
        return text

    @property
    def sort_key(self):
        return (INTERACTION_KINDS.index(self.kind), self.element_id, self.tile)


def parse_chain_code(text):
    """把 "R3-D7-S2:15" 还原为 (kind, element_id, tile) 列表；LOS 为空串"""
    items = []
    if not text or text == "LOS":
        return items
    for token in text.split('-'):
        kind = _CODE_KINDS[token[0]]
        ident, _, tile = token[1:].partition(':')
        items.append((kind, int(ident), int(tile) if tile else -1))
    return items


@dataclass(frozen=True, eq=False)
class PropagationPath:
    """
    一条多径分量

    字段:
        mechanism_chain: 作用链（空表示 LOS）
        delay: 时延 τ = length / c (s)
        length: 几何总长度 (m)
        aod: 发射端 (方位角, 俯仰角)，度
        aoa: 接收端 (方位角, 俯仰角)，度
        gain: 2×2 复增益，行=接收极化 (V, H)，列=发射极化 (V, H)
    """
    mechanism_chain: Tuple[Interaction, ...]
    delay: float
    length: float
    aod: Tuple[float, float]
    aoa: Tuple[float, float]
    gain: np.ndarray

    @property
    def is_los(self):
        return len(self.mechanism_chain) == 0

    @property
    def chain_code(self):
        if self.is_los:
            return "LOS"
        return "-".join(i.code for i in self.mechanism_chain)

    @property
    def mechanism(self):
        """主机制名：los / reflection / diffraction / scattering"""
        if self.is_los:
            return "los"
        return self.mechanism_chain[0].kind

    @property
    def order(self):
        return len(self.mechanism_chain)

    @property
    def canonical_key(self):
        return (self.delay, tuple(i.sort_key for i in self.mechanism_chain))

    @property
    def identity(self):
        """去重用：作用链决定唯一路径"""
        return tuple(i.sort_key for i in self.mechanism_chain)

    @property
    def power(self):
        """四种极化组合的平均功率 ‖G‖²/2"""
        return float(np.sum(np.abs(self.gain) ** 2) / 2.0)

    def pol_gain(self, pol):
        """按 VV/VH/HV/HH 取增益；第一个字母为发射极化"""
        tx, rx = "VH".index(pol[0]), "VH".index(pol[1])
        return self.gain[rx, tx]


@dataclass(frozen=True)
class TraceConfig:
    """
    追踪配置

    字段:
        max_reflection_order: 最大反射阶数 [0, 10]
        enable_diffraction / enable_scattering / enable_vegetation: 机制开关
        scatter_tile_size: 散射瓦片边长 (m)
        center_frequency: 中心频率 (Hz)
        min_path_gain_db: 路径增益剔除门限
    """
    max_reflection_order: int = DEFAULT_MAX_REFLECTION_ORDER
    enable_diffraction: bool = True
    enable_scattering: bool = True
    enable_vegetation: bool = True
    scatter_tile_size: float = DEFAULT_SCATTER_TILE_SIZE
    center_frequency: float = BASELINE_F_CENTER
    min_path_gain_db: float = DEFAULT_MIN_PATH_GAIN_DB

    def __post_init__(self):
        bad = []
        order = self.max_reflection_order
        if int(order) != order or not 0 <= order <= MAX_REFLECTION_ORDER_LIMIT:
            bad.append("max_reflection_order")
        if not self.scatter_tile_size > 0:
            bad.append("scatter_tile_size")
        if not self.center_frequency > 0:
            bad.append("center_frequency")
        if bad:
            raise ValidationError("追踪配置非法", bad)

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.center_frequency

    @property
    def wavenumber(self):
        return 2 * np.pi / self.wavelength


@dataclass(frozen=True)
class BandSpec:
    """均匀频率栅格，含两端点"""
    f_center: float
    bandwidth: float
    n_points: int

    def __post_init__(self):
        bad = []
        if not self.f_center > 0:
            bad.append("f_center")
        if not self.bandwidth > 0:
            bad.append("bandwidth")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            bad.append("n_points")
        if bad:
            raise ValidationError("频带参数非法", bad)

    @property
    def spacing(self):
        return self.bandwidth / (self.n_points - 1)

    @property
    def frequencies(self):
        return np.linspace(self.f_center - self.bandwidth / 2,
                           self.f_center + self.bandwidth / 2, self.n_points)

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.f_center


@dataclass(frozen=True)
class TrajectorySpec:
    """匀速直线轨迹"""
    start: Tuple[float, float, float]
    direction: Tuple[float, float, float]
    speed: float
    sample_interval: float
    n_samples: int

    def __post_init__(self):
        bad = []
        if not self.speed > 0:
            bad.append("speed")
        if not self.sample_interval > 0:
            bad.append("sample_interval")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            bad.append("n_samples")
        if not np.linalg.norm(self.direction) > 0:
            bad.append("direction")
        if bad:
            raise ValidationError("轨迹参数非法", bad)

    @property
    def unit_direction(self):
        d = np.asarray(self.direction, dtype=float)
        return d / np.linalg.norm(d)

    @property
    def time_step(self):
        return self.sample_interval / self.speed

    @property
    def velocity(self):
        return self.speed * self.unit_direction

    def position(self, index):
        return np.asarray(self.start, dtype=float) + self.unit_direction * self.sample_interval * index

    def positions(self):
        idx = np.arange(self.n_samples, dtype=float)
        return np.asarray(self.start, dtype=float) + np.outer(idx * self.sample_interval, self.unit_direction)


@dataclass(frozen=True, eq=False)
class ChannelSnapshot:
    """单个轨迹采样点的路径集合"""
    index: int
    rx_position: Tuple[float, float, float]
    time_s: float
    paths: Tuple[PropagationPath, ...]
    flagged: bool = False


@dataclass(frozen=True, eq=False)
class CTF:
    """
    信道传递函数

    H: [n_points × 4] 复矩阵，列顺序固定为 VV, VH, HV, HH
    delay_origin: 最早路径时延 (s)，CIR 时延轴的原点；H 本身按绝对时延组装
    """
    H: np.ndarray
    band: BandSpec
    delay_origin: float = 0.0

    def column(self, pol):
        return self.H[:, POLARIZATIONS.index(pol)]


@dataclass(frozen=True, eq=False)
class CIR:
    """信道冲激响应：taps [n × 4]，delays 为绝对时延轴"""
    taps: np.ndarray
    delays: np.ndarray
    band: BandSpec

    @property
    def resolution(self):
        return 1.0 / self.band.bandwidth


@dataclass(frozen=True, eq=False)
class PowerDelayProfile:
    """功率时延谱"""
    delays: np.ndarray
    powers: np.ndarray
    polarization: str = "VV"
    resolution: Optional[float] = None
    metadata: dict = field(default_factory=dict)
