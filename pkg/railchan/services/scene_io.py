# -*- coding: utf-8 -*-
"""
场景文件读写模块

文件格式（UTF-8 文本，按行）:
    RCSCENE 1
    meta <key> <json>                                   元数据
    m <name> <eps_r> <tan_delta> <S> <alpha> <veg>      材料
    o <object_id> <class>                               对象开始
    s <id> <material> <n> x1 y1 z1 ... xn yn zn         面
    w <id> <face_a> <face_b> <exterior> x1 y1 z1 x2 y2 z2   劈

另提供三角面片文本网格导入（v / f 记录，扩展 usemtl / class / o）
"""

import json
import logging
import os
import shlex

from railchan.config import (
    SCENE_FILE_HEADER, SCENE_COORD_DIGITS, OBJECT_CLASSES, CLASS_MATERIALS
)
from railchan.errors import ParseError, ResolutionError, RailchanError
from railchan.models.scene import Scene, Surface, Wedge
from railchan.services.geometry import surface_problems
from railchan.services.materials import (
    format_material_record, parse_material_record, material_map
)
from railchan.services.persistence import atomic_write_text
from railchan.services.wedges import extract_wedges

logger = logging.getLogger(__name__)


def _fmt(x):
    """默认 9 位有效数字；9 位不能精确还原时退回最短精确表示"""
    text = f"{x:.{SCENE_COORD_DIGITS}g}"
    return text if float(text) == x else repr(float(x))


def _fmt_points(points):
    return " ".join(_fmt(c) for p in points for c in p)


def dump_scene(scene):
    """场景序列化为文本"""
    lines = [SCENE_FILE_HEADER]
    for key in sorted(scene.metadata):
        value = json.dumps(scene.metadata[key], sort_keys=True, ensure_ascii=False)
        lines.append(f"meta {key} {value}")

    seen = {}
    for s in scene.surfaces:
        seen.setdefault(s.material.name, s.material)
    for material in seen.values():
        lines.append(format_material_record(material))

    current = None
    for s in scene.surfaces:
        if s.object_id != current:
            lines.append(f"o {s.object_id} {s.object_class}")
            current = s.object_id
        lines.append(f"s {s.id} {shlex.quote(s.material.name)} {len(s.vertices)} {_fmt_points(s.vertices)}")

    for w in scene.wedges:
        lines.append(f"w {w.id} {w.face_a} {w.face_b} {w.exterior_angle!r} {_fmt_points(w.edge)}")
    return "\n".join(lines) + "\n"


def save_scene(scene, path):
    """原子写出场景文件"""
    atomic_write_text(path, dump_scene(scene))
    logger.info("[场景文件] 已保存 %s (%d 个面)", path, len(scene.surfaces))


def _floats(tokens, line_no, what):
    try:
        return [float(t) for t in tokens]
    except ValueError as e:
        raise ParseError(f"{what} 含非法数值: {e}", line_no) from e


def _ints(tokens, line_no, what):
    try:
        return [int(t) for t in tokens]
    except ValueError as e:
        raise ParseError(f"{what} 含非法整数: {e}", line_no) from e


def _triples(values):
    return tuple(tuple(values[i:i + 3]) for i in range(0, len(values), 3))


def _checked_surface(surface, line_no):
    problems = surface_problems(surface)
    if problems:
        raise ParseError("; ".join(problems), line_no)
    return surface


def parse_scene(text):
    """
    解析场景文本

    材料名先在文件内 m 记录中查找，再回退到内置材料表
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != SCENE_FILE_HEADER:
        raise ParseError(f"缺少文件头 {SCENE_FILE_HEADER}", 1)

    materials = dict(material_map())
    metadata, surfaces, wedges = {}, [], []
    current_object = None

    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tag = line.split(None, 1)[0]

        if tag == "meta":
            parts = line.split(None, 2)
            if len(parts) != 3:
                raise ParseError("meta 记录需要键和值", line_no)
            try:
                metadata[parts[1]] = json.loads(parts[2])
            except json.JSONDecodeError as e:
                raise ParseError(f"meta {parts[1]} 不是合法 JSON: {e}", line_no) from e
            continue

        tokens = shlex.split(line)
        if tag == "m":
            material = parse_material_record(tokens, line_no)
            materials[material.name] = material
        elif tag == "o":
            if len(tokens) != 3:
                raise ParseError("o 记录格式: o <object_id> <class>", line_no)
            object_id = _ints(tokens[1:2], line_no, "对象编号")[0]
            if tokens[2] not in OBJECT_CLASSES:
                raise ParseError(f"未知对象类别 {tokens[2]}", line_no)
            current_object = (object_id, tokens[2])
        elif tag == "s":
            surfaces.append(_parse_surface(tokens, line_no, materials, current_object))
        elif tag == "w":
            if len(tokens) != 11:
                raise ParseError("w 记录需要 10 个字段", line_no)
            ident, face_a, face_b = _ints(tokens[1:4], line_no, "劈")
            values = _floats(tokens[4:], line_no, f"劈 {ident}")
            wedges.append(Wedge(ident, _triples(values[1:]), face_a, face_b, values[0]))
        else:
            raise ParseError(f"未知记录类型 {tag}", line_no)

    try:
        return Scene(tuple(surfaces), tuple(wedges), metadata)
    except RailchanError as e:
        raise ParseError(str(e)) from e


def _parse_surface(tokens, line_no, materials, current_object):
    if len(tokens) < 4:
        raise ParseError("s 记录字段不足", line_no)
    ident = _ints(tokens[1:2], line_no, "面编号")[0]
    if current_object is None:
        raise ParseError(f"面 {ident} 出现在任何 o 记录之前", line_no)
    n = _ints(tokens[3:4], line_no, f"面 {ident} 顶点数")[0]
    if n < 3:
        raise ParseError(f"面 {ident} 只有 {n} 个顶点，至少需要 3 个", line_no)
    coords = _floats(tokens[4:], line_no, f"面 {ident}")
    if len(coords) != 3 * n:
        raise ParseError(f"面 {ident} 声明 {n} 个顶点，实际坐标 {len(coords)} 个", line_no)
    name = tokens[2]
    if name not in materials:
        raise ResolutionError(f"第 {line_no} 行: 面 {ident} 引用未知材料 {name}")
    surface = Surface(ident, _triples(coords), materials[name], current_object[1], current_object[0])
    return _checked_surface(surface, line_no)


def load_scene(path):
    """读取场景文件"""
    with open(path, 'r', encoding='utf-8') as f:
        scene = parse_scene(f.read())
    logger.info("[场景文件] 已加载 %s (%d 个面, %d 条劈)", path, len(scene.surfaces), len(scene.wedges))
    return scene


def import_mesh(path, materials=None):
    """
    导入三角面片/多边形文本网格

    支持记录:
        v x y z           顶点
        f i j k ...       面（1 起始索引，可带 /vt/vn 后缀）
        usemtl <材料名>   后续面的材料
        class <类别>      后续面的对象类别
        o <对象编号>      开始新对象

    返回:
        Scene: 劈由几何自动提取
    """
    table = material_map(materials)
    vertices, surfaces = [], []
    object_class = "building"
    material_name = None
    object_id = 0
    used_objects = set()

    with open(path, 'r', encoding='utf-8') as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            tokens = shlex.split(line)
            tag = tokens[0]
            if tag == "v":
                if len(tokens) < 4:
                    raise ParseError("v 记录需要 3 个坐标", line_no)
                vertices.append(tuple(_floats(tokens[1:4], line_no, "顶点")))
            elif tag == "usemtl":
                material_name = " ".join(tokens[1:])
                if material_name not in table:
                    raise ResolutionError(f"第 {line_no} 行: 未知材料 {material_name}")
            elif tag == "class":
                if len(tokens) != 2 or tokens[1] not in OBJECT_CLASSES:
                    raise ParseError(f"未知对象类别 {' '.join(tokens[1:])}", line_no)
                object_class = tokens[1]
            elif tag == "o":
                object_id = _ints(tokens[1:2], line_no, "对象编号")[0] if len(tokens) > 1 else len(used_objects)
            elif tag == "f":
                idx = _ints([t.split('/')[0] for t in tokens[1:]], line_no, "面索引")
                if len(idx) < 3:
                    raise ParseError(f"面 {len(surfaces)} 只有 {len(idx)} 个顶点，至少需要 3 个", line_no)
                try:
                    verts = tuple(vertices[i - 1 if i > 0 else i] for i in idx)
                except IndexError:
                    raise ParseError("面索引越界", line_no) from None
                material = table[material_name or CLASS_MATERIALS[object_class]]
                surface = Surface(len(surfaces), verts, material, object_class, object_id)
                surfaces.append(_checked_surface(surface, line_no))
                used_objects.add(object_id)
            elif tag in ("vt", "vn", "s", "g", "mtllib"):
                continue
            else:
                raise ParseError(f"未知记录类型 {tag}", line_no)

    metadata = {"module": "imported", "version": "complete", "source": os.path.basename(path)}
    draft = Scene(tuple(surfaces), (), metadata)
    scene = Scene(draft.surfaces, tuple(extract_wedges(draft)), metadata)
    logger.info("[网格导入] %s: %d 个面", path, len(scene.surfaces))
    return scene
