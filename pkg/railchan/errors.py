# -*- coding: utf-8 -*-
"""
异常定义模块
服务层只负责抛出，命令行层统一捕获并映射为退出码
"""


class RailchanError(Exception):
    """所有项目内异常的基类"""


class ValidationError(RailchanError):
    """
    参数或配置校验失败

    属性:
        fields: 出错的字段/配置键列表
    """

    def __init__(self, message, fields=None):
        self.fields = list(fields or [])
        if self.fields:
            message = f"{message}: {', '.join(self.fields)}"
        super().__init__(message)


class DomainError(RailchanError, ValueError):
    """输入超出运算定义域（角度越界、距离非正等）"""


class ParseError(RailchanError):
    """文件解析失败，附带行号"""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"第 {line} 行: {message}"
        super().__init__(message)


class ResolutionError(RailchanError):
    """名称无法解析（如未知材料）"""


class SceneLookupError(RailchanError, KeyError):
    """场景中找不到指定对象"""

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class ClassificationError(RailchanError):
    """场景缺少屏障/隧道分类，无法精简"""


class FitError(RailchanError):
    """拟合所需数据不足或退化"""


class EstimationError(RailchanError):
    """统计估计样本不足"""


class MeasurementError(RailchanError):
    """外部测量数据读取失败"""
