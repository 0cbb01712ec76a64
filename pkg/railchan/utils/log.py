# -*- coding: utf-8 -*-
"""
日志配置
日志级别由环境变量 RAILCHAN_LOG 控制
"""

import logging
import os

from railchan.config import LOG_ENV_VAR, DEFAULT_LOG_LEVEL

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def setup_logging(level=None):
    """
    初始化根日志器（只需在入口调用一次）

    参数:
        level: 显式指定的级别名，默认读取 RAILCHAN_LOG
    """
    name = (level or os.environ.get(LOG_ENV_VAR) or DEFAULT_LOG_LEVEL).upper()
    numeric = getattr(logging, name, None)
    if not isinstance(numeric, int):
        numeric = logging.WARNING
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
    logging.getLogger().setLevel(numeric)
    return numeric
