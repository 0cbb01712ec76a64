# -*- coding: utf-8 -*-
"""
统计量与随机模型参数数据模型
"""

from dataclasses import dataclass, field, asdict
from typing import Dict, Tuple

import numpy as np

from railchan.config import (
    DEFAULT_N_CLUSTERS, DEFAULT_INTRA_CLUSTER_DECAY
)
from railchan.errors import ValidationError

SPREAD_KINDS = ("ASA", "ASD", "ESA", "ESD")


@dataclass(frozen=True)
class LinkStats:
    """单个快照的链路统计量"""
    path_loss_db: float
    k_factor_db: float
    rms_delay_spread_s: float
    coherence_bw_hz: float
    asa_deg: float
    asd_deg: float
    esa_deg: float
    esd_deg: float

    def spread(self, which):
        return getattr(self, f"{which.lower()}_deg")

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class PathLossFit:
    """对数距离路径损耗拟合 PL = pl0 + 10·n·log10(d)，d0 = 1 m"""
    pl0_db: float
    n: float
    sigma_sf_db: float

    def predict(self, distance):
        return self.pl0_db + 10.0 * self.n * np.log10(np.asarray(distance, dtype=float))


@dataclass(frozen=True, eq=False)
class FadingDecomposition:
    """
    大小尺度衰落分离结果

    字段:
        centers: 窗中心位置 (m)
        large_scale_db: 窗中心处大尺度功率 (dB)
        positions: 原始采样位置 (m)
        large_scale_interp_db: 插值到每个采样点的大尺度功率 (dB)
        small_scale: 小尺度包络比（瞬时包络 / 大尺度包络）
    """
    centers: np.ndarray
    large_scale_db: np.ndarray
    positions: np.ndarray
    large_scale_interp_db: np.ndarray
    small_scale: np.ndarray


@dataclass(frozen=True)
class RiceanFit:
    """莱斯拟合：k_linear、总功率 Ω 与 KS 距离"""
    k_linear: float
    omega: float
    goodness: float
    degenerate: bool = False

    @property
    def k_db(self):
        if self.k_linear <= 0:
            return float('-inf')
        return 10.0 * np.log10(self.k_linear)


@dataclass(frozen=True)
class StochasticParams:
    """
    随机信道模型参数

    字段:
        pl: 路径损耗拟合
        k_db: K 因子 (均值, 标准差)，dB 域正态
        ds_log: log10(时延扩展/s) 的 (均值, 标准差)
        as_log: 四种角度扩展 log10(扩展/度) 的 (均值, 标准差)
        n_clusters: 簇数
        intra_cluster_decay: 簇内指数衰减常数 (s)
        shadow_decorrelation_m: 阴影去相关距离 (m)
    """
    pl: PathLossFit
    k_db: Tuple[float, float]
    ds_log: Tuple[float, float]
    as_log: Dict[str, Tuple[float, float]]
    n_clusters: int = DEFAULT_N_CLUSTERS
    intra_cluster_decay: float = DEFAULT_INTRA_CLUSTER_DECAY
    shadow_decorrelation_m: float = 25.0

    def __post_init__(self):
        bad = []
        if not self.pl.sigma_sf_db >= 0:
            bad.append("pl.sigma_sf_db")
        if not self.k_db[1] >= 0:
            bad.append("k_db.std")
        if not self.ds_log[1] >= 0:
            bad.append("ds_log.std")
        for kind in SPREAD_KINDS:
            if kind not in self.as_log or not self.as_log[kind][1] >= 0:
                bad.append(f"as_log.{kind}")
        if int(self.n_clusters) != self.n_clusters or self.n_clusters < 1:
            bad.append("n_clusters")
        if not self.intra_cluster_decay > 0:
            bad.append("intra_cluster_decay")
        if not self.shadow_decorrelation_m > 0:
            bad.append("shadow_decorrelation_m")
        if bad:
            raise ValidationError("随机模型参数非法", bad)


@dataclass
class RoundTripReport:
    """拟合→合成→再拟合的闭环报告"""
    n_links: int
    seed: int
    fitted: StochasticParams
    deltas: Dict[str, float] = field(default_factory=dict)
    confidence: Dict[str, float] = field(default_factory=dict)
    wide_confidence: bool = False
