# -*- coding: utf-8 -*-
"""
参数化场景构造测试
"""

from collections import Counter

import numpy as np
import pytest

from railchan.config import MATERIAL_TABLE, MODULE_KINDS
from railchan.errors import ValidationError
from railchan.models.scene import FurnitureSpec, ScenarioSpec
from railchan.services.geometry import surface_problems
from railchan.services.scene_builder import build_module, surface_count
from railchan.services.scene_io import dump_scene

TABLE_NAMES = {name for name, _, _ in MATERIAL_TABLE}


def _classes(scene):
    return Counter(s.object_class for s in scene.surfaces)


@pytest.mark.parametrize("kind", MODULE_KINDS)
def test_surface_count_formula_matches_build(kind):
    spec = ScenarioSpec(kind)
    scene = build_module(spec)
    assert len(scene.surfaces) == surface_count(spec)


@pytest.mark.parametrize("kind", MODULE_KINDS)
def test_every_surface_is_valid_and_uses_known_material(kind):
    scene = build_module(ScenarioSpec(kind))
    for s in scene.surfaces:
        assert surface_problems(s) == []
        assert s.material.name in TABLE_NAMES
    assert len({s.id for s in scene.surfaces}) == len(scene.surfaces)


def test_rect_tunnel_inventory():
    scene = build_module(ScenarioSpec("m5"))
    assert _classes(scene) == {"ground": 1, "tunnel_wall": 3, "track": 12, "train": 6}
    assert len(scene.surfaces) == 22
    meta = scene.metadata
    assert meta["module"] == "m5"
    assert meta["version"] == "complete"
    assert meta["barrier_height"] == 0.0


def test_arch_tunnel_segments():
    spec = ScenarioSpec("m5", tunnel_shape="arch", arch_segments=8)
    scene = build_module(spec)
    assert _classes(scene)["tunnel_wall"] == 2 + 8
    assert len(scene.surfaces) == surface_count(spec)


def test_tunnel_walls_face_inwards():
    scene = build_module(ScenarioSpec("m5", include_train=False))
    axis = np.array([250.0, 0.0, 3.0])
    for s in scene.surfaces:
        if s.object_class in ("ground", "tunnel_wall"):
            assert (axis - s.centroid) @ s.normal > 0


def test_materials_follow_object_classes():
    scene = build_module(ScenarioSpec("m1"))
    by_class = {s.object_class: s.material.name for s in scene.surfaces}
    assert by_class["barrier"] == "Metal"
    assert by_class["train"] == "Aluminium alloy"
    assert by_class["cutting_wall"] == "Concrete"


def test_material_override_by_class():
    scene = build_module(ScenarioSpec("m5", materials={"tunnel_wall": "Smooth marble"}))
    assert {s.material.name for s in scene.surfaces if s.object_class == "tunnel_wall"} == {"Smooth marble"}


def test_single_track_viaduct_has_no_train_by_default():
    scene = build_module(ScenarioSpec("m6"))
    classes = _classes(scene)
    assert "train" not in classes
    assert classes["track"] == 6
    assert min(s.points[:, 2].min() for s in scene.surfaces if s.object_class == "track") == pytest.approx(12.0)


def test_furniture_boxes_in_tunnel():
    spec = ScenarioSpec("m5", furniture=(FurnitureSpec(50.0), FurnitureSpec(80.0, side=-1)))
    scene = build_module(spec)
    assert _classes(scene)["furniture"] == 12


def test_build_is_deterministic():
    spec = ScenarioSpec("m3", length=300.0)
    assert dump_scene(build_module(spec)) == dump_scene(build_module(spec))


def test_box_objects_yield_wedges():
    scene = build_module(ScenarioSpec("m5"))
    assert len(scene.wedges) > 0
    for w in scene.wedges:
        assert np.pi < w.exterior_angle <= 2 * np.pi + 1e-9


@pytest.mark.parametrize("kwargs, field", [
    ({"length": -1.0}, "length"),
    ({"tunnel_shape": "oval"}, "tunnel_shape"),
    ({"materials": {"spaceship": "Metal"}}, "materials.spaceship"),
])
def test_invalid_spec_lists_fields(kwargs, field):
    with pytest.raises(ValidationError) as excinfo:
        build_module(ScenarioSpec("m5", **kwargs))
    assert field in excinfo.value.fields


def test_unknown_module_kind():
    with pytest.raises(ValidationError) as excinfo:
        build_module(ScenarioSpec("m9"))
    assert "module_kind" in excinfo.value.fields


def test_roadside_billboards_and_signs():
    spec = ScenarioSpec("m1")
    scene = build_module(spec)
    classes = _classes(scene)
    assert classes["billboard"] == 13 * 2
    assert classes["traffic_sign"] == 6 * 2
    materials = {s.material.name for s in scene.surfaces if s.object_class == "billboard"}
    assert materials == {"Concrete", "Metal", "LED"}
    # 广告牌全部位于 +y 侧屏障外，交通标志位于 −y 侧屏障内
    outer = spec.barrier_offset + spec.barrier_thickness / 2
    for s in scene.surfaces:
        if s.object_class == "billboard":
            assert s.points[:, 1].min() > outer
        elif s.object_class == "traffic_sign":
            assert -outer < s.points[:, 1].min() and s.points[:, 1].max() < 0
    screens = [s for s in scene.surfaces if s.material.name == "LED"]
    assert all(s.normal[1] == pytest.approx(-1.0) for s in screens)


def test_elevated_modules_have_signs_without_billboards():
    for kind in ("m2", "m6"):
        classes = _classes(build_module(ScenarioSpec(kind)))
        assert "billboard" not in classes
        assert classes["traffic_sign"] == 12
    signs = [s for s in build_module(ScenarioSpec("m6")).surfaces if s.object_class == "traffic_sign"]
    assert min(s.points[:, 2].min() for s in signs) == pytest.approx(12.0 + 2.5)
