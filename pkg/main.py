# -*- coding: utf-8 -*-
"""
铁路毫米波信道仿真 - 命令行入口
用法: python main.py <scene|trace|sweep|stats|fit|synth|compare|plots> [参数]
"""

import sys

from railchan import run
from railchan.utils import setup_logging


if __name__ == '__main__':
    setup_logging()
    sys.exit(run())
