# -*- coding: utf-8 -*-
"""
信道统计模块
时延扩展、相干带宽、K 因子、四种角度扩展、路径损耗拟合、莱斯拟合、SNR 对比、机制贡献
"""

import logging
import math

import numpy as np
from scipy import stats as sps

from railchan.config import (
    DEFAULT_ANALYSIS_POL, DEFAULT_CB_LEVEL, DEFAULT_NOISE_FIGURE_DB, K_FACTOR_CAP_DB,
    MIN_MOMENT_SAMPLES, MIN_RICEAN_SAMPLES, THERMAL_NOISE_DBM_HZ
)
from railchan.errors import DomainError, EstimationError, FitError
from railchan.models.channel import ChannelSnapshot, PowerDelayProfile
from railchan.models.stats import SPREAD_KINDS, LinkStats, PathLossFit, RiceanFit

logger = logging.getLogger(__name__)

_K_CAP_LINEAR = 10.0 ** (K_FACTOR_CAP_DB / 10.0)


def _db(x):
    return 10.0 * math.log10(x) if x > 0 else float('-inf')


def _paths_of(snapshot_or_paths):
    if isinstance(snapshot_or_paths, ChannelSnapshot):
        return snapshot_or_paths.paths
    return tuple(snapshot_or_paths)


def _path_powers(paths, pol):
    if pol is None:
        return np.array([p.power for p in paths], dtype=float)
    return np.array([abs(p.pol_gain(pol)) ** 2 for p in paths], dtype=float)


# ---------- 时延域 ----------

def rms_delay_spread(pdp):
    """
    RMS 时延扩展 √(Σpτ²/Σp − (Σpτ/Σp)²)

    参数:
        pdp: PowerDelayProfile 或 (delays, powers)

    返回:
        float: 秒
    """
    if isinstance(pdp, PowerDelayProfile):
        delays, powers = pdp.delays, pdp.powers
    else:
        delays, powers = pdp
    delays = np.asarray(delays, dtype=float)
    powers = np.asarray(powers, dtype=float)
    total = powers.sum() if powers.size else 0.0
    if not total > 0:
        raise DomainError("功率时延谱为空或总功率为 0")
    # 以最早时延为参考，减小大绝对时延下的抵消误差
    tau = delays - delays[np.argmax(powers > 0)]
    mean = np.sum(powers * tau) / total
    var = np.sum(powers * tau ** 2) / total - mean ** 2
    return float(math.sqrt(max(var, 0.0)))


def coherence_bandwidth(ctf_column, spacing, level=DEFAULT_CB_LEVEL):
    """
    相干带宽：归一化频率自相关幅度首次低于 level 的频率间隔

    自相关按重叠点数无偏归一化；格点之间线性插值；始终不低于 level 时返回全带宽

    参数:
        ctf_column: 单个极化的 CTF 列
        spacing: 频率间隔 (Hz)
        level: 门限（默认 0.5）
    """
    h = np.asarray(ctf_column, dtype=complex)
    n = len(h)
    if n < 2:
        raise DomainError("相干带宽至少需要 2 个频点")
    if not 0.0 < level < 1.0:
        raise DomainError(f"相干门限必须在 (0, 1) 内: {level}")
    full = np.correlate(h, h, mode='full')[n - 1:]      # R[m] = Σ_k h[k+m]·conj(h[k])
    r = full / np.arange(n, 0, -1)
    if abs(r[0]) == 0:
        return float((n - 1) * spacing)
    mag = np.abs(r) / abs(r[0])
    below = np.nonzero(mag < level)[0]
    if len(below) == 0:
        return float((n - 1) * spacing)
    m = int(below[0])
    frac = (mag[m - 1] - level) / (mag[m - 1] - mag[m])
    return float((m - 1 + frac) * spacing)


# ---------- K 因子 ----------

def k_factor_rays(paths, pol=DEFAULT_ANALYSIS_POL):
    """
    射线法 K 因子：LOS 功率 / 其余路径功率之和 (dB)

    无 LOS 返回 −∞；只有 LOS 返回 +∞ 并记录日志
    """
    paths = _paths_of(paths)
    if not paths:
        raise DomainError("路径集合为空")
    powers = _path_powers(paths, pol)
    los = sum(p for path, p in zip(paths, powers) if path.is_los)
    rest = sum(p for path, p in zip(paths, powers) if not path.is_los)
    if los <= 0:
        return float('-inf')
    if rest <= 0:
        logger.info("[K因子] 只有视距路径，K = +∞")
        return float('inf')
    return _db(los / rest)


def _moment_k(envelope):
    """二阶/四阶矩估计 K（线性），返回 (K, 是否退化)"""
    r2 = np.asarray(envelope, dtype=float) ** 2
    ga = r2.mean()
    gv2 = max(np.mean(r2 ** 2) - ga ** 2, 0.0)
    los2 = ga ** 2 - gv2
    if los2 <= 0:
        return 0.0, False
    los = math.sqrt(los2)
    diffuse = ga - los
    if diffuse <= ga * 1e-12:
        return _K_CAP_LINEAR, True
    k = los / diffuse
    if k > _K_CAP_LINEAR:
        return _K_CAP_LINEAR, True
    return k, False


def k_factor_moment(envelope):
    """
    矩估计 K 因子 (dB)

    参数:
        envelope: 包络采样，至少 100 个
    """
    env = np.asarray(envelope, dtype=float)
    if env.size < MIN_MOMENT_SAMPLES:
        raise EstimationError(f"矩估计至少需要 {MIN_MOMENT_SAMPLES} 个样本，实际 {env.size}")
    k, degenerate = _moment_k(env)
    if degenerate:
        logger.warning("[K因子] 包络接近确定值，K 取上限 %.0f dB", K_FACTOR_CAP_DB)
    return _db(k)


def fit_ricean(envelope):
    """
    莱斯分布拟合（矩法 K 与 Ω）并给出 KS 距离

    参数:
        envelope: 小尺度包络，至少 1000 个正值

    返回:
        RiceanFit
    """
    env = np.asarray(envelope, dtype=float)
    if env.size < MIN_RICEAN_SAMPLES:
        raise EstimationError(f"莱斯拟合至少需要 {MIN_RICEAN_SAMPLES} 个样本，实际 {env.size}")
    if np.any(~np.isfinite(env)) or np.any(env <= 0):
        raise DomainError("包络样本必须为有限正数")

    k, degenerate = _moment_k(env)
    omega = float(np.mean(env ** 2))
    sigma = math.sqrt(omega / (2.0 * (k + 1.0)))
    b = math.sqrt(2.0 * k)
    goodness = float(sps.kstest(env, sps.rice(b, scale=sigma).cdf).statistic)
    if degenerate:
        logger.warning("[莱斯拟合] 包络方差接近 0，K 取上限 %.0f dB", K_FACTOR_CAP_DB)
    return RiceanFit(k_linear=float(k), omega=omega, goodness=goodness, degenerate=degenerate)


# ---------- 角度域 ----------

def _spread_values(paths, which):
    if which not in SPREAD_KINDS:
        raise DomainError(f"未知角度扩展类型: {which}")
    angle = (lambda p: p.aoa) if which.endswith("A") else (lambda p: p.aod)
    idx = 0 if which.startswith("A") else 1
    return np.array([angle(p)[idx] for p in paths], dtype=float)


def weighted_spread(values_deg, powers, circular):
    """
    功率加权角度扩展

    circular 为 True 时绕加权圆周均值取偏差并折叠到 (−180°, 180°]；
    否则用线性均值，偏差限制在 [−90°, 90°]
    """
    theta = np.asarray(values_deg, dtype=float)
    p = np.asarray(powers, dtype=float)
    total = p.sum()
    if not total > 0:
        raise DomainError("总功率为 0，角度扩展无定义")
    if circular:
        mean = np.angle(np.sum(p * np.exp(1j * np.radians(theta))), deg=True)
        dev = -((mean - theta + 180.0) % 360.0 - 180.0)
    else:
        mean = np.sum(p * theta) / total
        dev = np.clip(theta - mean, -90.0, 90.0)
    return float(math.sqrt(np.sum(p * dev ** 2) / total))


def angular_spread(paths, which, pol=DEFAULT_ANALYSIS_POL):
    """
    角度扩展（度）

    参数:
        paths: 路径列表或快照
        which: ASA / ASD / ESA / ESD
        pol: 功率取用的极化组合，None 表示路径总功率
    """
    paths = _paths_of(paths)
    if not paths:
        raise DomainError("路径集合为空")
    return weighted_spread(_spread_values(paths, which), _path_powers(paths, pol),
                           circular=which.startswith("A"))


# ---------- 路径损耗 ----------

def fit_path_loss(samples):
    """
    最小二乘拟合 PL = pl0 + 10·n·log10(d)，参考距离 1 m

    参数:
        samples: 可迭代的 (距离 m, 路径损耗 dB)

    返回:
        PathLossFit，阴影因子为残差标准差
    """
    data = np.asarray(list(samples), dtype=float).reshape(-1, 2)
    d, pl = data[:, 0], data[:, 1]
    finite = np.isfinite(pl) & np.isfinite(d)
    dropped = int((~finite).sum())
    if dropped:
        logger.warning("[路径损耗] 丢弃 %d 个非有限样本", dropped)
    d, pl = d[finite], pl[finite]
    if np.any(d <= 0):
        raise FitError("距离必须为正")
    if len(np.unique(d)) < 2:
        raise FitError("至少需要 2 个不同距离")
    x = 10.0 * np.log10(d)
    n, pl0 = np.polyfit(x, pl, 1)
    residuals = pl - (pl0 + n * x)
    return PathLossFit(pl0_db=float(pl0), n=float(n), sigma_sf_db=float(np.std(residuals)))


def path_loss_db(paths, pol=DEFAULT_ANALYSIS_POL):
    """局部平均路径损耗：−10·log10(Σ|g|²)，无路径时为 +∞"""
    paths = _paths_of(paths)
    total = float(_path_powers(paths, pol).sum()) if paths else 0.0
    return -_db(total)


def noise_floor(bandwidth, noise_figure_db=DEFAULT_NOISE_FIGURE_DB):
    """接收噪声底 (dBm) = −174 + 10·log10(BW) + NF"""
    if not bandwidth > 0:
        raise DomainError("带宽必须为正")
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(bandwidth) + noise_figure_db


def snr_trace(path_loss, tx_power_dbm, noise_floor_dbm):
    """SNR(位置) = 发射功率 − 路径损耗 − 噪声底"""
    return tx_power_dbm - np.asarray(path_loss, dtype=float) - noise_floor_dbm


def compare_traces(model_snr, measured_snr):
    """
    模型与测量 SNR 曲线对比

    测量曲线线性插值到重叠区间内的模型位置，误差 = 测量 − 模型

    参数:
        model_snr / measured_snr: 可迭代的 (位置 m, SNR dB)

    返回:
        dict: mean_error_db, std_error_db, n_points
    """
    model = np.asarray(list(model_snr), dtype=float).reshape(-1, 2)
    meas = np.asarray(list(measured_snr), dtype=float).reshape(-1, 2)
    if len(model) == 0 or len(meas) == 0:
        raise DomainError("SNR 曲线为空")
    meas = meas[np.argsort(meas[:, 0], kind='stable')]
    lo, hi = meas[0, 0], meas[-1, 0]
    inside = (model[:, 0] >= lo) & (model[:, 0] <= hi)
    if not inside.any():
        raise DomainError(f"两条曲线位置区间不重叠: 测量 [{lo}, {hi}]")
    pos = model[inside, 0]
    error = np.interp(pos, meas[:, 0], meas[:, 1]) - model[inside, 1]
    return {
        "mean_error_db": float(np.mean(error)),
        "std_error_db": float(np.std(error)),
        "n_points": int(len(error)),
    }


# ---------- 汇总 ----------

def link_stats(snapshot, ctf=None, cb_level=DEFAULT_CB_LEVEL, pol=DEFAULT_ANALYSIS_POL):
    """
    单快照链路统计量

    参数:
        snapshot: ChannelSnapshot 或路径列表
        ctf: 对应的 CTF，用于相干带宽；缺省时相干带宽为 nan
        cb_level: 相干门限
        pol: 分析极化

    返回:
        LinkStats
    """
    paths = _paths_of(snapshot)
    cb = float('nan')
    if ctf is not None:
        cb = coherence_bandwidth(ctf.column(pol), ctf.band.spacing, cb_level)
    powers = _path_powers(paths, pol) if paths else np.zeros(0)
    if not powers.sum() > 0:
        return LinkStats(float('inf'), float('-inf'), 0.0, cb, 0.0, 0.0, 0.0, 0.0)

    delays = np.array([p.delay for p in paths])
    spreads = {kind: weighted_spread(_spread_values(paths, kind), powers, kind.startswith("A"))
               for kind in SPREAD_KINDS}
    return LinkStats(
        path_loss_db=-_db(float(powers.sum())),
        k_factor_db=k_factor_rays(paths, pol),
        rms_delay_spread_s=rms_delay_spread((delays, powers)),
        coherence_bw_hz=cb,
        asa_deg=spreads["ASA"],
        asd_deg=spreads["ASD"],
        esa_deg=spreads["ESA"],
        esd_deg=spreads["ESD"],
    )


def mechanism_label(path):
    if path.is_los:
        return "los"
    if path.mechanism == "reflection":
        return f"reflection_{path.order}"
    return path.mechanism


def mechanism_contribution(snapshots, pol=None):
    """
    各传播机制的接收功率占比（全部快照累加）

    返回:
        dict: {机制: 占比}，反射按阶数分开，按 los、reflection_k、diffraction、scattering 排序
    """
    totals = {}
    for snap in snapshots:
        paths = _paths_of(snap)
        for path, p in zip(paths, _path_powers(paths, pol)):
            label = mechanism_label(path)
            totals[label] = totals.get(label, 0.0) + float(p)
    grand = sum(totals.values())

    def order(label):
        head, _, k = label.partition("_")
        rank = {"los": 0, "reflection": 1, "diffraction": 2, "scattering": 3}[head]
        return rank, int(k) if k else 0

    return {label: (totals[label] / grand if grand > 0 else 0.0) for label in sorted(totals, key=order)}
