# -*- coding: utf-8 -*-
"""
测量数据读取模块
SNR 曲线可来自本地 CSV 或 http(s) 地址，列为 position_m, snr_db
"""

import io
import logging

import pandas as pd
import requests

from railchan.config import HEADERS, MEASUREMENT_TIMEOUT
from railchan.errors import MeasurementError

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("position_m", "snr_db")


def is_url(source):
    return str(source).lower().startswith(("http://", "https://"))


def fetch_text(url, timeout=MEASUREMENT_TIMEOUT):
    """
    通过 HTTP 拉取测量文件

    参数:
        url: http(s) 地址
        timeout: 超时（秒）

    返回:
        str: 响应文本
    """
    try:
        response = requests.get(url, headers=HEADERS, timeout=timeout)
        response.raise_for_status()
    except requests.RequestException as e:
        raise MeasurementError(f"拉取测量数据失败 {url}: {e}") from e
    response.encoding = response.encoding or 'utf-8'
    logger.info("[测量数据] 已拉取 %s (%d 字节)", url, len(response.content))
    return response.text


def load_trace(source, columns=TRACE_COLUMNS):
    """
    读取 (位置, SNR) 曲线

    参数:
        source: 本地路径或 http(s) 地址
        columns: 需要的两列列名

    返回:
        list[tuple[float, float]]
    """
    try:
        if is_url(source):
            frame = pd.read_csv(io.StringIO(fetch_text(source)))
        else:
            frame = pd.read_csv(source)
    except FileNotFoundError as e:
        raise MeasurementError(f"找不到测量文件: {source}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise MeasurementError(f"测量文件格式错误 {source}: {e}") from e

    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise MeasurementError(f"测量文件 {source} 缺少列: {', '.join(missing)}")
    data = frame[list(columns)].apply(pd.to_numeric, errors='coerce').dropna()
    if data.empty:
        raise MeasurementError(f"测量文件 {source} 没有有效数据行")
    return list(data.itertuples(index=False, name=None))
