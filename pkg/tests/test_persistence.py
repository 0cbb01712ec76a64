# -*- coding: utf-8 -*-
"""
结果文件读写测试
"""

import os

import numpy as np
import pandas as pd
import pytest

from builders import make_path, reflection
from railchan.errors import ParseError
from railchan.models.channel import CTF, BandSpec, ChannelSnapshot, Interaction, parse_chain_code
from railchan.services.persistence import (
    PATH_COLUMNS, atomic_write_json, frame_to_csv_text, load_json, paths_frame, read_csv,
    read_ctf_file, snapshots_frame, snapshots_from_frames, write_csv, write_ctf_file
)


def test_atomic_json(tmp_path):
    path = str(tmp_path / "sub" / "result.json")
    atomic_write_json(path, {"b": np.float64(1.5), "a": np.arange(3), "flag": np.bool_(True)})
    assert load_json(path) == {"a": [0, 1, 2], "b": 1.5, "flag": True}
    assert not os.path.exists(path + ".tmp")


def test_json_keys_are_sorted(tmp_path):
    path = str(tmp_path / "r.json")
    atomic_write_json(path, {"zeta": 1, "alpha": 2})
    text = open(path, encoding="utf-8").read()
    assert text.index('"alpha"') < text.index('"zeta"')


def _ctfs(rng, band, n):
    out = []
    for i in range(n):
        H = rng.standard_normal((band.n_points, 4)) + 1j * rng.standard_normal((band.n_points, 4))
        out.append(CTF(H, band, 1e-7 * (i + 1)))
    return out


def test_ctf_file_round_trip(tmp_path, rng):
    band = BandSpec(64.32e9, 8e9, 33)
    ctfs = _ctfs(rng, band, 3)
    path = str(tmp_path / "ctf.bin")
    write_ctf_file(path, ctfs, band)
    loaded = read_ctf_file(path)
    assert len(loaded) == 3
    for a, b in zip(ctfs, loaded):
        np.testing.assert_array_equal(a.H, b.H)
        assert a.delay_origin == b.delay_origin
        assert b.band == band


def test_ctf_file_bad_magic(tmp_path, rng):
    band = BandSpec(60e9, 1e9, 5)
    path = str(tmp_path / "ctf.bin")
    write_ctf_file(path, _ctfs(rng, band, 1), band)
    with open(path, "r+b") as f:
        f.write(b"XXXXXX")
    with pytest.raises(ParseError):
        read_ctf_file(path)


def test_ctf_file_truncated(tmp_path, rng):
    band = BandSpec(60e9, 1e9, 5)
    path = str(tmp_path / "ctf.bin")
    write_ctf_file(path, _ctfs(rng, band, 2), band)
    data = open(path, "rb").read()
    with open(path, "wb") as f:
        f.write(data[:-8])
    with pytest.raises(ParseError):
        read_ctf_file(path)
    with open(path, "wb") as f:
        f.write(data[:10])
    with pytest.raises(ParseError):
        read_ctf_file(path)


def _snapshots():
    point = (1.0, 2.0, 3.0)
    gain = np.array([[0.1 + 0.2j, -0.3j], [0.05, -0.7 + 0.01j]]) * 1e-4
    paths_a = (
        make_path(1e-7 / 3, amplitude=1e-3, aod=(12.5, -1.0), aoa=(-167.5, 1.0)),
        make_path(2e-7, gain=gain, chain=[reflection(4, point), reflection(7, point)]),
        make_path(3e-7, amplitude=1e-6, chain=[Interaction("scattering", 2, point, 15)]),
    )
    paths_b = (make_path(4e-7, chain=[Interaction("diffraction", 9, point)]),)
    return [ChannelSnapshot(0, (10.0, 2.5, 4.5), 0.0, paths_a),
            ChannelSnapshot(1, (10.002, 2.5, 4.5), 1.44e-5, paths_b, flagged=True),
            ChannelSnapshot(2, (10.004, 2.5, 4.5), 2.88e-5, ())]


def test_frames_round_trip(tmp_path):
    snaps = _snapshots()
    write_csv(str(tmp_path / "paths.csv"), paths_frame(snaps))
    write_csv(str(tmp_path / "snapshots.csv"), snapshots_frame(snaps))
    path_frame = read_csv(str(tmp_path / "paths.csv"))
    assert list(path_frame.columns) == PATH_COLUMNS
    restored = snapshots_from_frames(read_csv(str(tmp_path / "snapshots.csv")), path_frame)
    assert [s.index for s in restored] == [0, 1, 2]
    assert restored[1].flagged and not restored[0].flagged
    assert restored[2].paths == ()
    for a, b in zip(snaps, restored):
        assert a.rx_position == b.rx_position
        assert a.time_s == b.time_s
        assert [p.identity for p in a.paths] == [p.identity for p in b.paths]
        assert [p.delay for p in a.paths] == [p.delay for p in b.paths]
        np.testing.assert_array_equal([p.gain for p in a.paths], [p.gain for p in b.paths])
        assert [p.aoa for p in a.paths] == [p.aoa for p in b.paths]


def test_chain_codes_in_path_table():
    frame = paths_frame(_snapshots())
    assert list(frame["mechanism_chain"]) == ["LOS", "R4-R7", "S2:15", "D9"]
    assert parse_chain_code("R4-R7") == [("reflection", 4, -1), ("reflection", 7, -1)]
    assert parse_chain_code("S2:15") == [("scattering", 2, 15)]
    assert parse_chain_code("LOS") == []


def test_csv_uses_full_precision():
    text = frame_to_csv_text(pd.DataFrame({"x": [0.1, 1.0 / 3.0]}))
    values = [float(v) for v in text.splitlines()[1:]]
    assert values == [0.1, 1.0 / 3.0]
    assert "0.10000000000000001" in text
