# -*- coding: utf-8 -*-
"""
railchan.services 包初始化
"""

from railchan.services.em_core import fresnel, utd_coefficient, scatter_gain, free_space_gain
from railchan.services.materials import material_table, resolve_material, load_materials_file
from railchan.services.scene_builder import build_module
from railchan.services.scene_reduce import reduce_scene
from railchan.services.scene_io import save_scene, load_scene, import_mesh
from railchan.services.wedges import extract_wedges
from railchan.services.tracer import (
    TraceContext,
    trace_los,
    trace_reflections,
    trace_diffraction,
    trace_scattering,
    trace_all
)
from railchan.services.channel import (
    sweep,
    assemble_ctf,
    ctf_to_cir,
    pdp,
    doppler,
    apply_antenna_pattern
)
from railchan.services.stats import (
    rms_delay_spread,
    coherence_bandwidth,
    k_factor_rays,
    k_factor_moment,
    fit_ricean,
    angular_spread,
    fit_path_loss,
    compare_traces,
    link_stats,
    mechanism_contribution
)
from railchan.services.fading import separate_fading
from railchan.services.stochgen import fit_params, synthesize, validate_roundtrip, save_params, load_params
from railchan.services.measurement import load_trace
from railchan.services.workers import ordered_map

__all__ = [
    'fresnel',
    'utd_coefficient',
    'scatter_gain',
    'free_space_gain',
    'material_table',
    'resolve_material',
    'load_materials_file',
    'build_module',
    'reduce_scene',
    'save_scene',
    'load_scene',
    'import_mesh',
    'extract_wedges',
    'TraceContext',
    'trace_los',
    'trace_reflections',
    'trace_diffraction',
    'trace_scattering',
    'trace_all',
    'sweep',
    'assemble_ctf',
    'ctf_to_cir',
    'pdp',
    'doppler',
    'apply_antenna_pattern',
    'rms_delay_spread',
    'coherence_bandwidth',
    'k_factor_rays',
    'k_factor_moment',
    'fit_ricean',
    'angular_spread',
    'fit_path_loss',
    'compare_traces',
    'link_stats',
    'mechanism_contribution',
    'separate_fading',
    'fit_params',
    'synthesize',
    'validate_roundtrip',
    'save_params',
    'load_params',
    'load_trace',
    'ordered_map'
]
