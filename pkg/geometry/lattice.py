"""
球覆盖模块
用轴对齐格点覆盖欧氏球：格距 s = 2*cover_radius/sqrt(d)，格胞半对角线恰为 cover_radius
"""

import math
from itertools import product
from typing import Iterator

import numpy as np

from utils.errors import ValidationError
from .metric import Point, as_point

# 格点半径截断时的浮点容差
_RADIUS_SLACK = 1e-12


def lattice_spacing(cover_radius: float, dim: int) -> float:
    """格距"""
    return 2.0 * cover_radius / math.sqrt(dim)


def lattice_size_bound(radius: float, cover_radius: float, dim: int) -> int:
    """覆盖点数上界 (2*ceil(radius/s)+1)^d，精确整数"""
    if cover_radius <= 0:
        raise ValidationError("覆盖半径必须为正")
    if radius < 0:
        raise ValidationError("球半径不能为负")
    s = lattice_spacing(cover_radius, dim)
    m = math.ceil(radius / s)
    return (2 * m + 1) ** dim


def _integer_offsets(m: int, dim: int, max_norm: float) -> Iterator[tuple]:
    """枚举 [-m, m]^d 中范数不超过 max_norm 的整数向量（字典序）"""
    limit = max_norm * max_norm * (1 + _RADIUS_SLACK) + _RADIUS_SLACK
    axis = range(-m, m + 1)
    for z in product(axis, repeat=dim):
        if sum(c * c for c in z) <= limit:
            yield z


def lattice_offsets(radius: float, cover_radius: float, dim: int) -> np.ndarray:
    """
    以原点为锚的格点偏移

    仅保留距中心不超过 radius + cover_radius 的格点；超出该范围的格胞与球不相交
    """
    s = lattice_spacing(cover_radius, dim)
    m = math.ceil(radius / s)
    max_norm = (radius + cover_radius) / s
    offsets = np.array(list(_integer_offsets(m, dim, max_norm)), dtype=float)
    return offsets.reshape(-1, dim) * s


def cover_ball(center: Point, radius: float, cover_radius: float) -> np.ndarray:
    """
    覆盖球 B(center, radius)

    Returns:
        格点矩阵 C，球内任意点到 C 的距离不超过 cover_radius；C 包含 center 本身
    """
    c = as_point(center)
    if cover_radius <= 0:
        raise ValidationError("覆盖半径必须为正")
    if radius < 0:
        raise ValidationError("球半径不能为负")
    return c[None, :] + lattice_offsets(radius, cover_radius, c.shape[0])
