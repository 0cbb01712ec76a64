# -*- coding: utf-8 -*-
"""
材料库模块
内置材料表 + 文本材料文件覆盖
"""

import logging
import shlex

from railchan.config import (
    MATERIAL_TABLE, VEGETATION_MATERIAL,
    DEFAULT_SCATTER_S, DEFAULT_SCATTER_ALPHA, DEFAULT_VEG_ATTEN_DB_M
)
from railchan.errors import ParseError, ResolutionError, RailchanError
from railchan.models.scene import Material

logger = logging.getLogger(__name__)


def _build_table(scatter_s=DEFAULT_SCATTER_S, scatter_alpha=DEFAULT_SCATTER_ALPHA,
                 veg_atten=DEFAULT_VEG_ATTEN_DB_M):
    table = []
    for name, eps_r, tan_delta in MATERIAL_TABLE:
        if name == VEGETATION_MATERIAL:
            # 植被不走定向散射，只按穿越长度衰减
            table.append(Material(name, eps_r, tan_delta, 0.0, 1, veg_atten))
        else:
            table.append(Material(name, eps_r, tan_delta, scatter_s, scatter_alpha, 0.0))
    return tuple(table)


_DEFAULT_TABLE = _build_table()


def material_table(scatter_s=None, scatter_alpha=None, veg_atten=None):
    """
    返回内置的 8 种材料（不可变，按声明顺序）

    参数:
        scatter_s / scatter_alpha / veg_atten: 覆盖默认散射、植被参数
    """
    if scatter_s is None and scatter_alpha is None and veg_atten is None:
        return _DEFAULT_TABLE
    return _build_table(
        DEFAULT_SCATTER_S if scatter_s is None else scatter_s,
        DEFAULT_SCATTER_ALPHA if scatter_alpha is None else scatter_alpha,
        DEFAULT_VEG_ATTEN_DB_M if veg_atten is None else veg_atten,
    )


def material_map(table=None):
    """{名称: Material}"""
    return {m.name: m for m in (table or material_table())}


def resolve_material(name, table=None):
    """按名称查找材料，找不到抛 ResolutionError"""
    materials = material_map(table)
    try:
        return materials[name]
    except KeyError:
        raise ResolutionError(f"未知材料: {name}") from None


def format_material_record(material):
    """材料记录: m <name> <eps_r> <tan_delta> <S> <alpha> <veg>"""
    return (f"m {shlex.quote(material.name)} {material.eps_r!r} {material.tan_delta!r} "
            f"{material.scatter_s!r} {int(material.scatter_alpha)} {material.veg_atten!r}")


def parse_material_record(tokens, line_no):
    """解析一条已分词的材料记录（首个 token 为 'm'）"""
    if len(tokens) != 7:
        raise ParseError(f"材料记录需要 6 个字段，实际 {len(tokens) - 1} 个", line_no)
    name = tokens[1]
    try:
        values = [float(t) for t in tokens[2:7]]
    except ValueError as e:
        raise ParseError(f"材料 {name} 数值非法: {e}", line_no) from e
    try:
        return Material(name, values[0], values[1], values[2], int(values[3]), values[4])
    except RailchanError as e:
        raise ParseError(str(e), line_no) from e


def load_materials_file(path):
    """
    读取材料文件，覆盖/扩充内置材料表

    文件每行一条 `m` 记录，# 开头为注释

    返回:
        tuple[Material]: 内置表（被同名记录替换）+ 新增材料
    """
    merged = dict(material_map())
    with open(path, 'r', encoding='utf-8') as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue
            tokens = shlex.split(line)
            if tokens[0] != 'm':
                raise ParseError(f"材料文件只允许 m 记录，遇到 {tokens[0]}", line_no)
            material = parse_material_record(tokens, line_no)
            if material.name in merged:
                logger.info("[材料库] 覆盖内置材料 %s", material.name)
            merged[material.name] = material
    return tuple(merged.values())
