# -*- coding: utf-8 -*-
"""
根目录 conftest：把项目根加入导入路径
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
