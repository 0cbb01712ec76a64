# -*- coding: utf-8 -*-
"""
railchan.commands 包初始化
包含所有子命令的注册
"""

from railchan.commands import compare, fit, plots, scene, stats, sweep, synth, trace
from railchan.commands.common import common_parser

COMMANDS = (scene, trace, sweep, stats, fit, synth, compare, plots)


def register_commands(subparsers, common=None):
    """注册所有子命令"""
    common = common or common_parser()
    for module in COMMANDS:
        module.register(subparsers, common)


__all__ = [
    'COMMANDS',
    'common_parser',
    'register_commands'
]
