# -*- coding: utf-8 -*-
"""
测试公共夹具
"""

import numpy as np
import pytest

from builders import corridor_scene, inward_box
from railchan.services.materials import material_map


@pytest.fixture
def materials():
    return material_map()


@pytest.fixture
def box_room():
    return inward_box(0.0, 10.0, 0.0, 6.0, 0.0, 4.0)


@pytest.fixture
def corridor():
    return corridor_scene()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
