# -*- coding: utf-8 -*-
"""
railchan.utils 包初始化
"""

from railchan.utils.log import setup_logging
from railchan.utils.settings import flatten_ini, read_flat_config, write_flat_config

__all__ = [
    'setup_logging',
    'flatten_ini',
    'read_flat_config',
    'write_flat_config'
]
