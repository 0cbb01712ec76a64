# -*- coding: utf-8 -*-
"""
INI 展平读写测试
"""

import pytest

from railchan.errors import ParseError
from railchan.utils.settings import dump_flat_config, flatten_ini, read_flat_config, write_flat_config


def test_flatten_keeps_order_and_case():
    flat = flatten_ini("[run]\nSeed = 3 ; 行尾注释\n[band]\nn_points = 101\n")
    assert list(flat.items()) == [("run.Seed", "3"), ("band.n_points", "101")]


def test_malformed_ini():
    with pytest.raises(ParseError):
        flatten_ini("seed = 3\n")


def test_dump_is_sorted_and_typed():
    text = dump_flat_config({"z.b": True, "a.x": 0.1, "z.a": (1, 2), "a.y": None}, header=["参数"])
    assert text.splitlines()[:4] == ["; 参数", "[a]", "x = 0.1", "y = "]
    assert "a = 1, 2" in text and "b = true" in text


def test_write_then_read(tmp_path):
    path = str(tmp_path / "p.ini")
    write_flat_config(path, {"pl.n": 2.5, "k.mean_db": -1.25})
    assert read_flat_config(path) == {"k.mean_db": "-1.25", "pl.n": "2.5"}
