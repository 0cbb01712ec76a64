# -*- coding: utf-8 -*-
"""
配置常量模块
包含物理常数、材料表、场景默认尺寸、追踪/信道/统计默认参数、文件格式等
"""

import os

from scipy import constants

# ==================== 路径配置 ====================
# 项目根目录（railchan 包的上级目录）
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIG_DIR = os.path.join(BASE_DIR, 'config')
DEFAULT_CONFIG_FILE = os.path.join(CONFIG_DIR, 'railchan.ini')
DEFAULT_OUTPUT_DIR = os.path.join(BASE_DIR, 'out')

VERSION = "1.0.0"

# ==================== 日志配置 ====================
LOG_ENV_VAR = "RAILCHAN_LOG"
DEFAULT_LOG_LEVEL = "WARNING"

# ==================== 物理常数 ====================
SPEED_OF_LIGHT = constants.c  # m/s
THERMAL_NOISE_DBM_HZ = -174.0  # 常温热噪声谱密度
DEFAULT_NOISE_FIGURE_DB = 7.0

# ==================== 材料表 ====================
# (名称, 相对介电常数, 损耗角正切)，顺序即声明顺序
MATERIAL_TABLE = [
    ("Metal", 1.00, 1e7),
    ("Concrete", 1.06, 0.65),
    ("Aluminium alloy", 1.29, 1e7),
    ("LED", 3.74, 3.14),
    ("Tempered glass", 10.00, 0.43),
    ("Vegetation", 29.12, 0.278),
    ("Smooth marble", 1.96, 0.30),
    ("Ceramic tile", 1.85, 0.07),
]
VEGETATION_MATERIAL = "Vegetation"

# 单瓣定向散射模型默认参数（非植被材料）
DEFAULT_SCATTER_S = 0.4
DEFAULT_SCATTER_ALPHA = 4
# 植被按路径长度衰减
DEFAULT_VEG_ATTEN_DB_M = 2.0

# ==================== 场景配置 ====================
MODULE_KINDS = ("m1", "m2", "m3", "m4", "m5", "m6")
MODULE_NAMES = {
    "m1": "Rural connecting cutting with crossing bridges",
    "m2": "Viaduct with open train station",
    "m3": "Urban with semi-closed train station",
    "m4": "Rural with cut and cover tunnel",
    "m5": "Rural connecting double-track tunnel",
    "m6": "Single-track viaduct",
}

OBJECT_CLASSES = (
    "ground", "track", "barrier", "pylon", "billboard", "traffic_sign",
    "crossing_bridge", "building", "tunnel_wall", "cct", "cutting_wall",
    "steep_wall", "train", "station", "awning", "indicator", "vegetation",
    "furniture",
)

# 各类对象默认材料
CLASS_MATERIALS = {
    "ground": "Concrete",
    "track": "Concrete",
    "barrier": "Metal",
    "pylon": "Metal",
    "billboard": "Metal",
    "traffic_sign": "Metal",
    "crossing_bridge": "Metal",
    "building": "Concrete",
    "tunnel_wall": "Concrete",
    "cct": "Concrete",
    "cutting_wall": "Concrete",
    "steep_wall": "Concrete",
    "train": "Aluminium alloy",
    "station": "Ceramic tile",
    "awning": "Metal",
    "indicator": "LED",
    "vegetation": "Vegetation",
    "furniture": "Metal",
}
# 城区建筑材料轮换
URBAN_BUILDING_MATERIALS = ("Tempered glass", "Smooth marble", "Ceramic tile")

# 这些类别的单面对象是环境包络面，不作为孤立薄板提取半平面劈
ENCLOSING_CLASSES = ("ground", "tunnel_wall", "cct", "cutting_wall", "steep_wall", "station")

DEFAULT_SCENE = {
    "length": 500.0,
    "corridor_width": 40.0,
    "track_spacing": 5.0,
    "rail_width": 1.5,
    "rail_height": 0.2,
    "barrier_height": 1.5,
    "barrier_offset": 6.0,
    "barrier_thickness": 0.2,
    "pylon_spacing": 50.0,
    "pylon_height": 8.0,
    "pylon_offset": 5.0,
    "pylon_width": 0.4,
    "deck_height": 12.0,
    "deck_width": 14.0,
    "deck_thickness": 2.0,
    "tunnel_width": 12.0,
    "tunnel_height": 7.5,
    "tunnel_shape": "rect",
    "arch_segments": 12,
    "cutting_offset": 12.0,
    "cutting_height": 8.0,
    "bridge_clearance": 7.0,
    "bridge_width": 10.0,
    "bridge_thickness": 1.5,
    "portal_height": 10.0,
    "building_offset": 20.0,
    "building_spacing": 40.0,
    "building_length": 20.0,
    "building_depth": 12.0,
    "building_height": 15.0,
    "station_length": 200.0,
    "platform_height": 1.1,
    "platform_width": 2.0,
    "awning_height": 6.0,
    "cct_length": 100.0,
    "cct_width": 14.0,
    "cct_height": 7.0,
    "vegetation_offset": 10.0,
    "vegetation_spacing": 60.0,
    "vegetation_size": (10.0, 4.0, 6.0),
    "billboard_spacing": 200.0,
    "billboard_setback": 2.5,
    "billboard_width": 6.0,
    "billboard_height": 3.0,
    "billboard_clearance": 3.0,
    "billboard_depth": 0.3,
    "sign_spacing": 250.0,
    "sign_width": 0.6,
    "sign_height": 0.8,
    "sign_elevation": 2.5,
    "train_x": 100.0,
    "train_length": 200.0,
    "train_width": 3.4,
    "train_height": 3.9,
}

# 隧道精简规则：小于该面积的附属设施忽略
FURNITURE_AREA_THRESHOLD_M2 = 7.0
SCENE_FILE_HEADER = "RCSCENE 1"
SCENE_COORD_DIGITS = 9

# ==================== 追踪配置 ====================
MAX_REFLECTION_ORDER_LIMIT = 10
DEFAULT_MAX_REFLECTION_ORDER = 2
DEFAULT_SCATTER_TILE_SIZE = 1.0    # m
DEFAULT_MIN_PATH_GAIN_DB = -250.0
OCCLUSION_EPS = 1e-6               # m
KELLER_CONE_TOL = 1e-6             # rad

# ==================== 频带/轨迹基线配置 ====================
BASELINE_F_CENTER = 64.32e9
BASELINE_BANDWIDTH = 8e9
BASELINE_N_POINTS = 801
BASELINE_SPEED_KMH = 500.0
BASELINE_SAMPLE_INTERVAL = 0.002      # m
BASELINE_TX_POWER_DBM = 0.0
ANTENNA_SETUPS = {
    1: (6.0, 4.5),
    2: (1.0, 0.92),
}
DEFAULT_ANALYSIS_POL = "VV"
POLARIZATIONS = ("VV", "VH", "HV", "HH")

# 常用算例预设
STUDY_PRESETS = {
    "baseline": {
        "band.f_center": BASELINE_F_CENTER,
        "band.bandwidth": BASELINE_BANDWIDTH,
        "band.n_points": BASELINE_N_POINTS,
        "trajectory.speed_kmh": BASELINE_SPEED_KMH,
        "trajectory.interval_mm": BASELINE_SAMPLE_INTERVAL * 1e3,
    },
    "outdoor90": {
        "scenario.module": "m1",
        "scenario.length": 600.0,
        "band.f_center": 93.2e9,
        "band.bandwidth": 2e9,
        "band.n_points": 201,
        "link.tx_height": 3.2,
        "link.rx_height": 3.0,
        "link.tx_x": 580.0,
        "trajectory.start_x": 0.0,
        "trajectory.towards_tx": True,
        "trajectory.speed_kmh": 500.0,
        "trajectory.interval_mm": 500.0,
        "trajectory.samples": 1000,
        "scenario.concise": True,
        "trace.enable_diffraction": False,
        "trace.enable_scattering": True,
        "trace.max_reflection_order": 2,
    },
    "tunnel30": {
        "scenario.module": "m5",
        "scenario.concise": True,
        "band.f_center": 30e9,
        "band.bandwidth": 500e6,
        "band.n_points": 101,
        "trace.max_reflection_order": 10,
        "trace.enable_diffraction": False,
        "trace.enable_scattering": False,
    },
}

# ==================== 统计配置 ====================
DEFAULT_CB_LEVEL = 0.5
FADING_WINDOW_WAVELENGTHS = 20.0
FADING_STEP_WAVELENGTHS = 10.0
K_FACTOR_CAP_DB = 30.0
MIN_MOMENT_SAMPLES = 100
MIN_RICEAN_SAMPLES = 1000

# ==================== 随机模型配置 ====================
DEFAULT_N_CLUSTERS = 5
DEFAULT_INTRA_CLUSTER_DECAY = 20e-9   # s
DEFAULT_RAYS_PER_CLUSTER = 10
MIN_FIT_SNAPSHOTS = 50
ROUNDTRIP_START_DISTANCE = 10.0       # m
ROUNDTRIP_SPACING = 5.0               # m

# ==================== 并发与输出 ====================
DEFAULT_JOBS = 1
SWEEP_CHUNK_SIZE = 64
CTF_MAGIC = b"RCCTF1"
CSV_FLOAT_FORMAT = "%.17g"
MEASUREMENT_TIMEOUT = 10  # HTTP 拉取测量数据超时（秒）
HEADERS = {
    "User-Agent": f"railchan/{VERSION}",
    "Accept": "text/csv, text/plain, */*",
}

# ==================== 运行配置默认值 ====================
# 点号键 → 默认值；配置文件与命令行只能使用这些键，清单中完整写出
RUN_DEFAULTS = {
    "run.seed": 0,
    "run.jobs": DEFAULT_JOBS,
    "run.out": "out",
    "run.preset": "",
    "scenario.module": "m5",
    "scenario.concise": False,
    "scenario.length": DEFAULT_SCENE["length"],
    "scenario.tunnel_shape": DEFAULT_SCENE["tunnel_shape"],
    "scenario.arch_segments": DEFAULT_SCENE["arch_segments"],
    "scenario.tunnel_width": DEFAULT_SCENE["tunnel_width"],
    "scenario.tunnel_height": DEFAULT_SCENE["tunnel_height"],
    "scenario.barrier_height": DEFAULT_SCENE["barrier_height"],
    "scenario.corridor_width": DEFAULT_SCENE["corridor_width"],
    "scenario.track_spacing": DEFAULT_SCENE["track_spacing"],
    "scenario.include_train": "",
    "scenario.materials_file": "",
    "materials.scatter_s": DEFAULT_SCATTER_S,
    "materials.scatter_alpha": DEFAULT_SCATTER_ALPHA,
    "materials.veg_atten_db_m": DEFAULT_VEG_ATTEN_DB_M,
    "trace.max_reflection_order": DEFAULT_MAX_REFLECTION_ORDER,
    "trace.enable_diffraction": True,
    "trace.enable_scattering": True,
    "trace.enable_vegetation": True,
    "trace.scatter_tile_size": DEFAULT_SCATTER_TILE_SIZE,
    "trace.min_path_gain_db": DEFAULT_MIN_PATH_GAIN_DB,
    "band.f_center": BASELINE_F_CENTER,
    "band.bandwidth": BASELINE_BANDWIDTH,
    "band.n_points": BASELINE_N_POINTS,
    "trajectory.speed_kmh": BASELINE_SPEED_KMH,
    "trajectory.interval_mm": BASELINE_SAMPLE_INTERVAL * 1e3,
    "trajectory.samples": 1000,
    "trajectory.start_x": 10.0,
    "trajectory.towards_tx": False,
    "link.setup": 1,
    "link.tx_height": "",
    "link.rx_height": "",
    "link.tx_x": 0.0,
    "link.tx_power_dbm": BASELINE_TX_POWER_DBM,
    "link.noise_floor_dbm": "",
    "link.noise_figure_db": DEFAULT_NOISE_FIGURE_DB,
    "stats.cb_level": DEFAULT_CB_LEVEL,
    "stats.polarization": DEFAULT_ANALYSIS_POL,
    "stochastic.n_clusters": DEFAULT_N_CLUSTERS,
    "stochastic.intra_cluster_decay": DEFAULT_INTRA_CLUSTER_DECAY,
    "stochastic.rays_per_cluster": DEFAULT_RAYS_PER_CLUSTER,
    "stochastic.n_links": 1,
}
# 可留空的键（空串表示按其它参数推导）
OPTIONAL_FLOAT_KEYS = ("link.tx_height", "link.rx_height", "link.noise_floor_dbm")
# 发射机距线路内侧的余量 (m)
TX_CLEARANCE = 0.1
TUNNEL_TX_WALL_GAP = 0.5
