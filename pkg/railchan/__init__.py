# -*- coding: utf-8 -*-
"""
命令行应用工厂
铁路毫米波射线追踪信道仿真
"""

import argparse
import logging

from railchan.commands import register_commands
from railchan.config import VERSION
from railchan.errors import ParseError, RailchanError, ResolutionError, ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


class RailchanParser(argparse.ArgumentParser):
    """参数错误抛出 ValidationError，而不是直接退出"""

    def error(self, message):
        raise ValidationError(f"命令行参数错误: {message}")


def create_parser():
    """
    应用工厂函数
    创建命令行解析器并注册所有子命令
    """
    parser = RailchanParser(prog="railchan", description="铁路毫米波射线追踪信道仿真")
    parser.add_argument("--version", action="version", version=f"railchan {VERSION}")
    subparsers = parser.add_subparsers(dest="command", parser_class=RailchanParser)
    register_commands(subparsers)
    return parser


def run(argv=None):
    """
    解析并执行一个子命令

    返回:
        int: 退出码，0 成功，1 校验/解析错误，2 运行错误
    """
    try:
        args = create_parser().parse_args(argv)
        if not getattr(args, "handler", None):
            raise ValidationError("缺少子命令", ["command"])
        return args.handler(args)
    except (ValidationError, ParseError, ResolutionError) as e:
        logger.error("[命令行] 校验失败: %s", e)
        return EXIT_VALIDATION
    except RailchanError as e:
        logger.error("[命令行] 运行失败: %s", e)
        return EXIT_RUNTIME
    except Exception:
        logger.exception("[命令行] 未预期的异常")
        return EXIT_RUNTIME


__all__ = [
    'EXIT_OK',
    'EXIT_VALIDATION',
    'EXIT_RUNTIME',
    'create_parser',
    'run'
]
