"""
日志配置工具
只在命令行入口调用；库代码只负责写日志，不配置输出目标
"""

import sys
from typing import Optional

from loguru import logger

from config import config

_FORMAT = "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <7}</level> | {extra[stage]} | {message}"


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None):
    """
    配置 loguru 输出

    Args:
        level: 日志级别，缺省取配置
        log_file: 可选日志文件
    """
    level = (level or config.LOG_LEVEL).upper()
    logger.remove()
    logger.configure(extra={"stage": "-"})
    logger.add(sys.stderr, level=level, format=_FORMAT)
    if log_file:
        logger.add(log_file, level="DEBUG", format=_FORMAT, encoding="utf-8")
    return logger
