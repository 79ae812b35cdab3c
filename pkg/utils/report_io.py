"""
报告读写工具
报告统一为 JSON，键排序，便于逐字节比较确定性
"""

import json
import math
import os
from typing import Any, Dict

import numpy as np

from config import config

# 报告中所有挂钟时间字段都放在这个键下，确定性比较时剔除
TIMING_KEY = "timing"


def to_jsonable(value: Any) -> Any:
    """把 numpy 标量/数组和 dataclass 字典递归转换为 JSON 可序列化对象"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def dump_report(report: Dict[str, Any]) -> str:
    """序列化报告"""
    return json.dumps(to_jsonable(report), sort_keys=True,
                      indent=config.REPORT_INDENT, ensure_ascii=False)


def write_report(report: Dict[str, Any], path: str):
    """写出报告文件"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dump_report(report))
        f.write("\n")


def read_report(path: str) -> Dict[str, Any]:
    """读取报告文件"""
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def strip_timing(report: Dict[str, Any]) -> Dict[str, Any]:
    """去掉所有挂钟时间字段（递归）"""
    result = {}
    for key, value in report.items():
        if key == TIMING_KEY:
            continue
        if isinstance(value, dict):
            value = strip_timing(value)
        elif isinstance(value, list):
            value = [strip_timing(v) if isinstance(v, dict) else v for v in value]
        result[key] = value
    return result
