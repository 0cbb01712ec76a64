# -*- coding: utf-8 -*-
"""
随机信道模型
从射线追踪统计量拟合参数，并按参数合成新的 CTF 序列

模型结构：
    对数距离路径损耗 + 指数自相关对数正态阴影（沿轨迹 AR(1)）；
    LOS 分量按链路抽取的 K 因子分配功率；
    n_clusters 个 NLOS 簇，簇功率按指数衰减，簇时延按抽取的时延扩展整体缩放；
    簇内射线角度按包裹高斯分布，整体缩放到抽取的角度扩展；
    K/时延扩展/角度扩展按链路抽取并沿轨迹保持，只有阴影和射线相位随位置演进
"""

import logging
import math

import numpy as np
from scipy import signal

from railchan.config import (
    DEFAULT_INTRA_CLUSTER_DECAY, DEFAULT_N_CLUSTERS, DEFAULT_RAYS_PER_CLUSTER, MIN_FIT_SNAPSHOTS,
    ROUNDTRIP_SPACING, ROUNDTRIP_START_DISTANCE, SPEED_OF_LIGHT
)
from railchan.errors import DomainError, FitError, ValidationError
from railchan.models.channel import BandSpec, ChannelSnapshot, Interaction, PropagationPath
from railchan.models.stats import SPREAD_KINDS, PathLossFit, RoundTripReport, StochasticParams
from railchan.services.channel import assemble_ctf
from railchan.services.geometry import direction_angles
from railchan.services.stats import fit_path_loss, link_stats
from railchan.utils.settings import read_flat_config, write_flat_config

logger = logging.getLogger(__name__)

# 阴影过程使用独立的随机流
_SHADOW_STREAM = 1
# 闭环验证容差：K 均值 (dB)、log10 时延扩展均值、去相关距离相对误差
ROUNDTRIP_TOLERANCE = {"k_mean_db": 0.5, "ds_log_mean": 0.05, "shadow_decorrelation_rel": 0.2}


def _normal_fit(values):
    """(均值, 标准差)；无有效值时均值为 −∞"""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return float('-inf'), 0.0
    return float(np.mean(v)), float(np.std(v))


def _log_fit(values):
    v = np.asarray(values, dtype=float)
    return _normal_fit(np.log10(v[v > 0]))


def decorrelation_distance(positions, residuals):
    """
    阴影去相关距离：残差自相关首次低于 1/e 的滞后（线性插值）

    残差先按中位间隔重采样到均匀网格；始终不低于 1/e 时返回序列跨度
    """
    x = np.asarray(positions, dtype=float)
    r = np.asarray(residuals, dtype=float)
    order = np.argsort(x, kind='stable')
    x, r = x[order], r[order]
    span = float(x[-1] - x[0])
    step = float(np.median(np.diff(x))) if len(x) > 1 else 0.0
    if not step > 0 or not np.std(r) > 0:
        return span if span > 0 else 1.0
    grid = np.arange(x[0], x[-1] + step * 0.5, step)
    z = np.interp(grid, x, r)
    z = z - z.mean()
    n = len(z)
    full = signal.correlate(z, z, mode='full', method='fft')[n - 1:] / np.arange(n, 0, -1)
    acf = full / full[0]
    threshold = math.exp(-1.0)
    below = np.nonzero(acf[: max(n // 2, 2)] < threshold)[0]
    if len(below) == 0:
        return span
    m = int(below[0])
    frac = (acf[m - 1] - threshold) / (acf[m - 1] - acf[m])
    return float((m - 1 + frac) * step)


def _fit(link_stats_list, distances, n_clusters, intra_cluster_decay, check):
    stats = list(link_stats_list)
    d = np.asarray(distances, dtype=float)
    if len(stats) != len(d):
        raise FitError("统计量与距离数量不一致")
    if check:
        if len(stats) < MIN_FIT_SNAPSHOTS:
            raise FitError(f"至少需要 {MIN_FIT_SNAPSHOTS} 个快照，实际 {len(stats)}")
        if not (d.min() > 0 and d.max() / d.min() >= 10.0 * (1 - 1e-9)):
            raise FitError("距离跨度不足一个数量级")

    pl_db = np.array([s.path_loss_db for s in stats])
    pl = fit_path_loss(zip(d, pl_db))
    finite = np.isfinite(pl_db)
    residuals = pl_db[finite] - pl.predict(d[finite])
    decor = decorrelation_distance(d[finite], residuals)

    k = np.array([s.k_factor_db for s in stats])
    k_fit = _normal_fit(k[np.isfinite(k)])
    if not np.isfinite(k).any() and np.any(k > 0):
        k_fit = (float('inf'), 0.0)
    return StochasticParams(
        pl=pl,
        k_db=k_fit,
        ds_log=_log_fit([s.rms_delay_spread_s for s in stats]),
        as_log={kind: _log_fit([s.spread(kind) for s in stats]) for kind in SPREAD_KINDS},
        n_clusters=n_clusters,
        intra_cluster_decay=intra_cluster_decay,
        shadow_decorrelation_m=decor,
    )


def fit_params(link_stats_list, distances, n_clusters=None, intra_cluster_decay=None):
    """
    由逐快照统计量拟合随机模型参数

    参数:
        link_stats_list: LinkStats 序列
        distances: 对应的收发距离 (m)
        n_clusters / intra_cluster_decay: 覆盖默认簇数与簇衰减常数

    返回:
        StochasticParams
    """
    params = _fit(link_stats_list, distances,
                  n_clusters if n_clusters is not None else DEFAULT_N_CLUSTERS,
                  intra_cluster_decay if intra_cluster_decay is not None else DEFAULT_INTRA_CLUSTER_DECAY,
                  check=True)
    logger.info("[随机模型] 拟合完成: n=%.3f, σ=%.2f dB, K=%.2f±%.2f dB, 去相关 %.1f m",
                params.pl.n, params.pl.sigma_sf_db, params.k_db[0], params.k_db[1],
                params.shadow_decorrelation_m)
    return params


# ---------- 合成 ----------

def link_rng(seed, link_index, stream=0):
    """链路随机数发生器，只由 (主种子, 链路序号) 决定"""
    key = [int(seed), int(link_index)] + ([int(stream)] if stream else [])
    return np.random.default_rng(key)


def _draw(rng, mean_std):
    mean, std = mean_std
    if not np.isfinite(mean):
        return mean
    return mean + std * rng.standard_normal()


def _scaled_deviations(z, weights, target):
    """把偏差 z 平移缩放为：加权均值 0、加权 RMS 等于 target"""
    w = weights / weights.sum()
    centered = z - np.sum(w * z)
    rms = math.sqrt(float(np.sum(w * centered ** 2)))
    if rms == 0 or not target > 0:
        return np.zeros_like(z)
    return centered * (target / rms)


def _wrap(deg):
    return (deg + 180.0) % 360.0 - 180.0


def _cluster_weights(params, n_clusters):
    """簇功率形状：以中位时延扩展为时间尺度的指数衰减"""
    tau_ref = 10.0 ** params.ds_log[0] if np.isfinite(params.ds_log[0]) else params.intra_cluster_decay
    c = np.arange(1, n_clusters + 1, dtype=float)
    w = np.exp(-c * tau_ref / params.intra_cluster_decay)
    if not w.sum() > 0:
        w = np.zeros(n_clusters)
        w[0] = 1.0
    return c, w / w.sum()


class _LinkRealization:
    """单条链路抽取的大尺度参数与射线结构"""

    def __init__(self, params, rng, rays_per_cluster):
        self.k_db = _draw(rng, params.k_db)
        k_lin = 10.0 ** (self.k_db / 10.0) if np.isfinite(self.k_db) else (math.inf if self.k_db > 0 else 0.0)
        self.los_only = math.isinf(k_lin)
        self.ds = 10.0 ** _draw(rng, params.ds_log) if np.isfinite(params.ds_log[0]) else 0.0
        self.spreads = {kind: (10.0 ** _draw(rng, params.as_log[kind]) if np.isfinite(params.as_log[kind][0]) else 0.0)
                        for kind in SPREAD_KINDS}

        n_rays = 0 if self.los_only else params.n_clusters * rays_per_cluster
        cluster_index, cluster_w = _cluster_weights(params, params.n_clusters)
        los_w = 1.0 if self.los_only else k_lin / (k_lin + 1.0)
        self.weights = np.concatenate([[los_w], np.repeat(cluster_w * (1.0 - los_w) / rays_per_cluster, rays_per_cluster)
                                       if n_rays else np.zeros(0)])
        self.cluster_of = np.concatenate([[-1], np.repeat(np.arange(params.n_clusters), rays_per_cluster)
                                          if n_rays else np.zeros(0, dtype=int)]).astype(int)
        self.ray_of = np.concatenate([[-1], np.tile(np.arange(rays_per_cluster), params.n_clusters)
                                      if n_rays else np.zeros(0, dtype=int)]).astype(int)

        # 时延：LOS 为 0，簇 c 为 s·c，s 使加权 RMS 时延扩展等于抽取值
        unit = np.concatenate([[0.0], np.repeat(cluster_index, rays_per_cluster) if n_rays else np.zeros(0)])
        w = self.weights / self.weights.sum()
        unit_ds = math.sqrt(max(float(np.sum(w * unit ** 2) - np.sum(w * unit) ** 2), 0.0))
        self.excess = unit * (self.ds / unit_ds) if unit_ds > 0 else np.zeros_like(unit)

        # 角度偏差：LOS 为 0，每簇一个中心偏差加簇内射线偏差
        count = len(self.weights)
        self.offsets = {}
        for kind in SPREAD_KINDS:
            z = np.zeros(count)
            if n_rays:
                centers = rng.standard_normal(params.n_clusters)
                z[1:] = np.repeat(centers, rays_per_cluster) + 0.2 * rng.standard_normal(n_rays)
            self.offsets[kind] = _scaled_deviations(z, self.weights, self.spreads[kind])
        self.phases = rng.uniform(0.0, 2.0 * np.pi, size=count)
        self.phases[0] = 0.0


def shadow_process(params, coords, rng):
    """
    沿轨迹的 AR(1) 阴影序列 (dB)，自相关 e^{−d/d_cor}

    参数:
        params: StochasticParams（取 sigma_sf_db 与 shadow_decorrelation_m）
        coords: 等间隔的沿线坐标 (m)
        rng: 随机数发生器
    """
    coords = np.asarray(coords, dtype=float)
    sigma = params.pl.sigma_sf_db
    n = len(coords)
    if sigma == 0 or n == 0:
        return np.zeros(n)
    noise = rng.standard_normal(n)
    steps = np.abs(np.diff(coords))
    if n > 1 and not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise DomainError("阴影过程要求等间隔坐标")
    rho = math.exp(-steps[0] / params.shadow_decorrelation_m) if n > 1 else 0.0
    drive = sigma * math.sqrt(1.0 - rho ** 2) * noise
    # 首个样本取平稳分布
    drive[0] = sigma * noise[0]
    return signal.lfilter([1.0], [1.0, -rho], drive)


def _snapshot_paths(link, tx, rx, total_power, wavenumber):
    """构造某个接收位置上的合成路径"""
    los = rx - tx
    distance = float(np.linalg.norm(los))
    aod_az, aod_el = direction_angles(los)
    aoa_az, aoa_el = direction_angles(-los)
    amps = np.sqrt(total_power * link.weights)
    paths = []
    for i in range(len(link.weights)):
        aod = (_wrap(aod_az + link.offsets["ASD"][i]), float(np.clip(aod_el + link.offsets["ESD"][i], -90, 90)))
        aoa = (_wrap(aoa_az + link.offsets["ASA"][i]), float(np.clip(aoa_el + link.offsets["ESA"][i], -90, 90)))
        arrival = np.array([math.cos(math.radians(aoa[1])) * math.cos(math.radians(aoa[0])),
                            math.cos(math.radians(aoa[1])) * math.sin(math.radians(aoa[0])),
                            math.sin(math.radians(aoa[1]))])
        if i == 0:
            phase = -wavenumber * distance
            chain = ()
        else:
            # 射线相位随接收端沿来波方向的位移演进
            phase = link.phases[i] + wavenumber * float(arrival @ rx)
            chain = (Interaction("scattering", int(link.cluster_of[i]), tuple(map(float, rx)), int(link.ray_of[i])),)
        delay = distance / SPEED_OF_LIGHT + float(link.excess[i])
        gain = amps[i] * np.exp(1j * phase) * np.eye(2, dtype=complex)
        paths.append(PropagationPath(chain, delay, delay * SPEED_OF_LIGHT, aod, aoa, gain))
    if link.weights[0] == 0:
        paths = paths[1:]
    paths.sort(key=lambda p: p.canonical_key)
    return tuple(paths)


def synthesize_snapshots(params, traj, band, seed, link_index=0, tx=(0.0, 0.0, 0.0),
                         rays_per_cluster=DEFAULT_RAYS_PER_CLUSTER):
    """
    合成一条链路沿轨迹的快照（合成路径集合）

    返回:
        生成器，依次产出 ChannelSnapshot
    """
    rng = link_rng(seed, link_index)
    link = _LinkRealization(params, rng, rays_per_cluster)
    tx = np.asarray(tx, dtype=float)
    positions = traj.positions()
    coords = np.arange(traj.n_samples) * traj.sample_interval
    shadow = shadow_process(params, coords, link_rng(seed, link_index, _SHADOW_STREAM))
    k = 2.0 * np.pi * band.f_center / SPEED_OF_LIGHT
    for i, rx in enumerate(positions):
        distance = float(np.linalg.norm(rx - tx))
        pl = params.pl.predict(max(distance, 1e-9)) + shadow[i]
        paths = _snapshot_paths(link, tx, rx, 10.0 ** (-pl / 10.0), k)
        yield ChannelSnapshot(i, tuple(map(float, rx)), float(i * traj.time_step), paths)


def synthesize(params, traj, band, seed, link_index=0, tx=(0.0, 0.0, 0.0),
               rays_per_cluster=DEFAULT_RAYS_PER_CLUSTER):
    """
    按参数合成 CTF 序列；给定种子结果逐位一致

    参数:
        params: StochasticParams
        traj: TrajectorySpec
        band: BandSpec
        seed: 主种子
        link_index: 链路序号（与主种子共同决定链路随机流）
        tx: 发射点

    返回:
        生成器，依次产出 CTF（与 channel.assemble_ctf 相同的组装方式）
    """
    for snap in synthesize_snapshots(params, traj, band, seed, link_index, tx, rays_per_cluster):
        yield assemble_ctf(snap, band)


def validate_roundtrip(params, n_links, seed, band=None, rays_per_cluster=DEFAULT_RAYS_PER_CLUSTER):
    """
    拟合 → 合成 → 再拟合 闭环检查

    n_links 条链路各取一个快照，沿线路从 10 m 起每 5 m 一个，阴影沿线相关；
    对合成快照重新提取统计量并拟合，报告参数偏差和均值的置信半宽

    返回:
        RoundTripReport
    """
    if int(n_links) != n_links or n_links < 2:
        raise ValidationError("链路数至少为 2", ["n_links"])
    band = band or BandSpec(60e9, 1e9, 2)
    tx = np.zeros(3)
    coords = ROUNDTRIP_START_DISTANCE + ROUNDTRIP_SPACING * np.arange(n_links)
    shadow = shadow_process(params, coords, link_rng(seed, n_links, _SHADOW_STREAM))
    k = 2.0 * np.pi * band.f_center / SPEED_OF_LIGHT

    stats = []
    for link_index, x in enumerate(coords):
        link = _LinkRealization(params, link_rng(seed, link_index), rays_per_cluster)
        rx = np.array([x, 0.0, 0.0])
        pl = params.pl.predict(x) + shadow[link_index]
        stats.append(link_stats(_snapshot_paths(link, tx, rx, 10.0 ** (-pl / 10.0), k)))

    fitted = _fit(stats, coords, params.n_clusters, params.intra_cluster_decay, check=False)
    deltas = {
        "pl.n": fitted.pl.n - params.pl.n,
        "pl.sigma_sf_db": fitted.pl.sigma_sf_db - params.pl.sigma_sf_db,
        "k_mean_db": fitted.k_db[0] - params.k_db[0],
        "k_std_db": fitted.k_db[1] - params.k_db[1],
        "ds_log_mean": fitted.ds_log[0] - params.ds_log[0],
        "ds_log_std": fitted.ds_log[1] - params.ds_log[1],
        "shadow_decorrelation_rel": fitted.shadow_decorrelation_m / params.shadow_decorrelation_m - 1.0,
    }
    for kind in SPREAD_KINDS:
        deltas[f"{kind.lower()}_log_mean"] = fitted.as_log[kind][0] - params.as_log[kind][0]

    # 95% 置信半宽
    z = 1.96 / math.sqrt(n_links)
    confidence = {
        "k_mean_db": z * fitted.k_db[1],
        "ds_log_mean": z * fitted.ds_log[1],
    }
    wide = any(confidence[key] > ROUNDTRIP_TOLERANCE[key] for key in confidence) or n_links < MIN_FIT_SNAPSHOTS
    if wide:
        logger.info("[闭环验证] %d 条链路，置信区间偏宽", n_links)
    return RoundTripReport(n_links=int(n_links), seed=int(seed), fitted=fitted,
                           deltas=deltas, confidence=confidence, wide_confidence=wide)


# ---------- 参数文件 ----------

def params_to_flat(params):
    """参数 → 点号键映射（INI 格式）"""
    flat = {
        "pathloss.pl0_db": params.pl.pl0_db,
        "pathloss.n": params.pl.n,
        "pathloss.sigma_sf_db": params.pl.sigma_sf_db,
        "kfactor.mean_db": params.k_db[0],
        "kfactor.std_db": params.k_db[1],
        "delay.log_mean": params.ds_log[0],
        "delay.log_std": params.ds_log[1],
        "cluster.n_clusters": int(params.n_clusters),
        "cluster.intra_cluster_decay_s": params.intra_cluster_decay,
        "shadow.decorrelation_m": params.shadow_decorrelation_m,
    }
    for kind in SPREAD_KINDS:
        flat[f"angle.{kind.lower()}_log_mean"] = params.as_log[kind][0]
        flat[f"angle.{kind.lower()}_log_std"] = params.as_log[kind][1]
    return {k: float(v) if not isinstance(v, int) else v for k, v in flat.items()}


def params_from_flat(flat):
    """点号键映射 → 参数；缺失或多余的键抛出 ValidationError"""
    expected = set(params_to_flat(_TEMPLATE))
    unknown = sorted(set(flat) - expected)
    missing = sorted(expected - set(flat))
    if unknown:
        raise ValidationError("参数文件包含未知键", unknown)
    if missing:
        raise ValidationError("参数文件缺少键", missing)
    try:
        v = {k: float(flat[k]) for k in expected if k != "cluster.n_clusters"}
        n_clusters = int(flat["cluster.n_clusters"])
    except ValueError as e:
        raise ValidationError(f"参数值无法解析: {e}") from e
    return StochasticParams(
        pl=PathLossFit(v["pathloss.pl0_db"], v["pathloss.n"], v["pathloss.sigma_sf_db"]),
        k_db=(v["kfactor.mean_db"], v["kfactor.std_db"]),
        ds_log=(v["delay.log_mean"], v["delay.log_std"]),
        as_log={kind: (v[f"angle.{kind.lower()}_log_mean"], v[f"angle.{kind.lower()}_log_std"])
                for kind in SPREAD_KINDS},
        n_clusters=n_clusters,
        intra_cluster_decay=v["cluster.intra_cluster_decay_s"],
        shadow_decorrelation_m=v["shadow.decorrelation_m"],
    )


def save_params(path, params):
    write_flat_config(path, params_to_flat(params), header=["railchan 随机信道模型参数"])


def load_params(path):
    return params_from_flat(read_flat_config(path))


def default_params():
    """闭环验证与示例使用的一组典型参数"""
    return _TEMPLATE


_TEMPLATE = StochasticParams(
    pl=PathLossFit(pl0_db=68.0, n=1.8, sigma_sf_db=3.0),
    k_db=(7.0, 3.0),
    ds_log=(-7.8, 0.2),
    as_log={"ASA": (1.3, 0.2), "ASD": (1.2, 0.2), "ESA": (0.9, 0.15), "ESD": (0.85, 0.15)},
)
