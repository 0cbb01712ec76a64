# -*- coding: utf-8 -*-
"""
配置文件读写工具
INI 文件的 [section] key 展平为 section.key 形式的点号键
"""

import configparser
import io

from railchan.errors import ParseError


def _new_parser():
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(';', '#'))
    # 保留键名大小写
    parser.optionxform = str
    return parser


def flatten_ini(text):
    """
    把 INI 文本展平为 {"section.key": "value"}

    参数:
        text: INI 格式字符串

    返回:
        dict: 点号键到原始字符串值的映射（保持文件内顺序）
    """
    parser = _new_parser()
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ParseError(f"配置文件格式错误: {e}", getattr(e, 'lineno', None)) from e

    flat = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            flat[f"{section}.{key}"] = value
    return flat


def read_flat_config(path):
    """读取 INI 文件并展平"""
    with open(path, 'r', encoding='utf-8') as f:
        return flatten_ini(f.read())


def dump_flat_config(flat, header=None):
    """
    把点号键映射还原为 INI 文本（按键排序，保证输出稳定）

    参数:
        flat: {"section.key": value}
        header: 可选的文件头注释行列表
    """
    sections = {}
    for dotted in sorted(flat):
        section, _, key = dotted.partition('.')
        sections.setdefault(section, []).append((key, flat[dotted]))

    buf = io.StringIO()
    for line in header or []:
        buf.write(f"; {line}\n")
    for section, items in sections.items():
        buf.write(f"[{section}]\n")
        for key, value in items:
            buf.write(f"{key} = {_format_value(value)}\n")
        buf.write("\n")
    return buf.getvalue()


def write_flat_config(path, flat, header=None):
    """写出点号键配置文件（原子写入）"""
    from railchan.services.persistence import atomic_write_text
    atomic_write_text(path, dump_flat_config(flat, header))


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_format_value(v) for v in value)
    if value is None:
        return ""
    return str(value)
