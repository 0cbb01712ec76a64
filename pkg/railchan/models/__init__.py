# -*- coding: utf-8 -*-
"""
railchan.models 包初始化
"""

from railchan.models.scene import FurnitureSpec, Material, ScenarioSpec, Scene, Surface, Wedge
from railchan.models.channel import (
    CIR,
    CTF,
    BandSpec,
    ChannelSnapshot,
    Interaction,
    PowerDelayProfile,
    PropagationPath,
    TraceConfig,
    TrajectorySpec,
    parse_chain_code
)
from railchan.models.stats import (
    SPREAD_KINDS,
    FadingDecomposition,
    LinkStats,
    PathLossFit,
    RiceanFit,
    RoundTripReport,
    StochasticParams
)
from railchan.models.run import RunConfig

__all__ = [
    'Material',
    'Surface',
    'Wedge',
    'Scene',
    'FurnitureSpec',
    'ScenarioSpec',
    'Interaction',
    'PropagationPath',
    'parse_chain_code',
    'TraceConfig',
    'BandSpec',
    'TrajectorySpec',
    'ChannelSnapshot',
    'CTF',
    'CIR',
    'PowerDelayProfile',
    'SPREAD_KINDS',
    'LinkStats',
    'PathLossFit',
    'FadingDecomposition',
    'RiceanFit',
    'StochasticParams',
    'RoundTripReport',
    'RunConfig'
]
