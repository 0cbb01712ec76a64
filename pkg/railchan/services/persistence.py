# -*- coding: utf-8 -*-
"""
结果持久化模块
JSON/文本原子写入、路径与快照 CSV、CTF 二进制文件
"""

import io
import json
import logging
import os
import struct

import numpy as np
import pandas as pd

from railchan.config import CTF_MAGIC, CSV_FLOAT_FORMAT, POLARIZATIONS
from railchan.errors import ParseError
from railchan.models.channel import (
    CTF, BandSpec, ChannelSnapshot, Interaction, PropagationPath, parse_chain_code
)

logger = logging.getLogger(__name__)

PATH_COLUMNS = [
    "snapshot_id", "path_id", "mechanism_chain", "delay_s", "length_m",
    "aod_az_deg", "aod_el_deg", "aoa_az_deg", "aoa_el_deg",
    "gain_vv_re", "gain_vv_im", "gain_vh_re", "gain_vh_im",
    "gain_hv_re", "gain_hv_im", "gain_hh_re", "gain_hh_im",
]
SNAPSHOT_COLUMNS = ["snapshot_id", "time_s", "rx_x", "rx_y", "rx_z", "n_paths", "flagged"]

_CTF_HEADER = struct.Struct("<6sIIdd")


def atomic_write_text(path, text):
    """写临时文件 → fsync → 原子替换"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp_file = path + ".tmp"
    with open(tmp_file, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp_file, path)


def atomic_write_bytes(path, data):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    tmp_file = path + ".tmp"
    with open(tmp_file, 'wb') as f:
        f.write(data)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp_file, path)


def dumps_json(data):
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True, default=_json_default) + "\n"


def atomic_write_json(path, data):
    """保存 JSON（键排序，保证字节稳定）"""
    atomic_write_text(path, dumps_json(data))


def load_json(path):
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.bool_):
        return bool(value)
    raise TypeError(f"无法序列化 {type(value).__name__}")


def frame_to_csv_text(frame):
    """DataFrame → CSV 文本，浮点统一 %.17g"""
    buf = io.StringIO()
    frame.to_csv(buf, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    return buf.getvalue()


def write_csv(path, frame):
    atomic_write_text(path, frame_to_csv_text(frame))


def read_csv(path):
    return pd.read_csv(path)


def paths_frame(snapshots):
    """快照路径表，列见 PATH_COLUMNS"""
    rows = []
    for snap in snapshots:
        for path_id, path in enumerate(snap.paths):
            g = path.gain
            rows.append([
                snap.index, path_id, path.chain_code, path.delay, path.length,
                path.aod[0], path.aod[1], path.aoa[0], path.aoa[1],
                g[0, 0].real, g[0, 0].imag, g[1, 0].real, g[1, 0].imag,
                g[0, 1].real, g[0, 1].imag, g[1, 1].real, g[1, 1].imag,
            ])
    return pd.DataFrame(rows, columns=PATH_COLUMNS)


def snapshots_frame(snapshots):
    rows = [[s.index, s.time_s, *map(float, s.rx_position), len(s.paths), int(s.flagged)] for s in snapshots]
    return pd.DataFrame(rows, columns=SNAPSHOT_COLUMNS)


def encode_ctf_header(band, n_snapshots):
    return _CTF_HEADER.pack(CTF_MAGIC, band.n_points, n_snapshots, band.f_center, band.bandwidth)


def encode_ctf_record(ctf):
    """单个快照：时延原点 + n_points × 4 极化的交错实虚部"""
    body = np.empty((ctf.H.shape[0], 8), dtype='<f8')
    body[:, 0::2] = ctf.H.real
    body[:, 1::2] = ctf.H.imag
    return struct.pack("<d", ctf.delay_origin) + body.tobytes()


def write_ctf_file(path, ctfs, band):
    """写出 CTF 二进制文件"""
    ctfs = list(ctfs)
    data = encode_ctf_header(band, len(ctfs)) + b"".join(encode_ctf_record(c) for c in ctfs)
    atomic_write_bytes(path, data)
    logger.info("[CTF] 已写出 %s (%d 个快照)", path, len(ctfs))


def read_ctf_file(path):
    """读取 CTF 二进制文件，返回 list[CTF]"""
    with open(path, 'rb') as f:
        data = f.read()
    if len(data) < _CTF_HEADER.size:
        raise ParseError(f"CTF 文件过短: {path}")
    magic, n_points, n_snap, fc, bw = _CTF_HEADER.unpack_from(data, 0)
    if magic != CTF_MAGIC:
        raise ParseError(f"CTF 文件标识错误: {magic!r}")
    band = BandSpec(fc, bw, n_points)
    record = 8 + n_points * len(POLARIZATIONS) * 2 * 8
    expected = _CTF_HEADER.size + n_snap * record
    if len(data) != expected:
        raise ParseError(f"CTF 文件长度 {len(data)} 与头部声明不符（应为 {expected}）")
    out = []
    offset = _CTF_HEADER.size
    for _ in range(n_snap):
        origin = struct.unpack_from("<d", data, offset)[0]
        body = np.frombuffer(data, dtype='<f8', count=n_points * 8, offset=offset + 8).reshape(n_points, 8)
        out.append(CTF(body[:, 0::2] + 1j * body[:, 1::2], band, origin))
        offset += record
    return out


def snapshots_from_frames(snap_frame, path_frame):
    """
    由 snapshots.csv 与 paths.csv 还原快照（作用点坐标不落盘，还原为 nan）

    返回:
        list[ChannelSnapshot]，按 snapshot_id 排序
    """
    nan_point = (float('nan'),) * 3
    grouped = {}
    for row in path_frame.itertuples(index=False):
        chain = tuple(Interaction(kind, ident, nan_point, tile)
                      for kind, ident, tile in parse_chain_code(row.mechanism_chain))
        gain = np.array([[complex(row.gain_vv_re, row.gain_vv_im), complex(row.gain_hv_re, row.gain_hv_im)],
                         [complex(row.gain_vh_re, row.gain_vh_im), complex(row.gain_hh_re, row.gain_hh_im)]])
        path = PropagationPath(chain, float(row.delay_s), float(row.length_m),
                               (float(row.aod_az_deg), float(row.aod_el_deg)),
                               (float(row.aoa_az_deg), float(row.aoa_el_deg)), gain)
        grouped.setdefault(int(row.snapshot_id), []).append((int(row.path_id), path))

    snapshots = []
    for row in snap_frame.sort_values("snapshot_id", kind="stable").itertuples(index=False):
        items = sorted(grouped.get(int(row.snapshot_id), []), key=lambda item: item[0])
        snapshots.append(ChannelSnapshot(
            index=int(row.snapshot_id),
            rx_position=(float(row.rx_x), float(row.rx_y), float(row.rx_z)),
            time_s=float(row.time_s),
            paths=tuple(p for _, p in items),
            flagged=bool(row.flagged),
        ))
    return snapshots
