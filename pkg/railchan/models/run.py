# -*- coding: utf-8 -*-
"""
运行配置数据模型
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from railchan.models.channel import BandSpec, TraceConfig, TrajectorySpec
from railchan.models.scene import ScenarioSpec


@dataclass(frozen=True)
class RunConfig:
    """
    一次批处理运行的完整配置

    字段:
        scenario: 场景描述
        concise: 是否使用精简场景
        trace / band / trajectory: 追踪、频带、轨迹配置
        tx: 发射点坐标
        setup: 天线高度预设编号（1 或 2）
        tx_height / rx_height: 收发天线高度（相对轨面，m）
        tx_power_dbm / noise_floor_dbm: 发射功率与噪声底
        cb_level / polarization: 统计门限与分析极化
        seed / jobs / out_dir: 随机种子、线程数、输出目录
        flat: 全部点号键的解析结果（写入清单）
    """
    scenario: ScenarioSpec
    concise: bool
    trace: TraceConfig
    band: BandSpec
    trajectory: TrajectorySpec
    tx: Tuple[float, float, float]
    setup: int
    tx_height: float
    rx_height: float
    tx_power_dbm: float
    noise_floor_dbm: float
    cb_level: float
    polarization: str
    seed: int
    jobs: int
    out_dir: str
    materials_file: Optional[str] = None
    flat: Dict = field(default_factory=dict)

    def value(self, key):
        return self.flat[key]
