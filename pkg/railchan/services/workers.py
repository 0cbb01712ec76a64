# -*- coding: utf-8 -*-
"""
并发工具
线程池按提交顺序返回结果，保证并行与串行输出一致
"""

from concurrent.futures import ThreadPoolExecutor

from railchan.config import DEFAULT_JOBS


def ordered_map(fn, items, jobs=DEFAULT_JOBS):
    """
    有序并行映射

    参数:
        fn: 纯函数
        items: 输入序列
        jobs: 线程数，1 表示在当前线程内执行

    返回:
        list: 与 items 一一对应的结果
    """
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(jobs, len(items))) as executor:
        return list(executor.map(fn, items))
