"""
随机投影模块
高斯 JL 投影到 d' 维，并把投影结果径向截断到 B(0, ln n + 1)
"""

import math
from typing import Optional

import numpy as np
from loguru import logger

from dp import SeededRng
from geometry import Dataset, clamp_rows_to_ball
from utils.errors import ValidationError


def target_dimension(k: int, eps: float, dim: int, jl_constant: float,
                     override: Optional[int] = None) -> int:
    """d' = ceil(jl_constant * ln(max(k,2)) / eps^2)，不超过原维度；override 优先"""
    if override is not None:
        if override < 1:
            raise ValidationError(f"d' 必须为正，得到 {override}")
        return int(override)
    d_prime = math.ceil(jl_constant * math.log(max(k, 2)) / (eps * eps))
    return max(1, min(d_prime, dim))


def clamp_radius(n: int) -> float:
    """投影后的截断半径 ln(n) + 1"""
    return math.log(max(n, 1)) + 1.0


def projected_norm_bound(n: int, d_prime: int) -> float:
    """
    单位向量投影后范数的高概率上界，与数据无关

    ||Gx||^2 服从 chi2(d')/d'，按卡方尾界取 t = ln n：
    sqrt(1 + 2*sqrt(t/d') + 2t/d')，不超过截断半径
    """
    if d_prime < 1:
        raise ValidationError(f"d' 必须为正，得到 {d_prime}")
    t = math.log(max(n, 2))
    bound = math.sqrt(1.0 + 2.0 * math.sqrt(t / d_prime) + 2.0 * t / d_prime)
    return min(bound, clamp_radius(n))


def gaussian_matrix(d_prime: int, dim: int, rng: SeededRng) -> np.ndarray:
    """d'×d 标准正态矩阵，按 1/sqrt(d') 缩放"""
    return rng.standard_normal((d_prime, dim)) / math.sqrt(d_prime)


def jl_project(data: Dataset, d_prime: int, rng: SeededRng) -> Dataset:
    """
    高斯随机投影

    Args:
        data: 原始数据集
        d_prime: 目标维度
        rng: 随机流

    Returns:
        投影并截断后的数据集，权重不变
    """
    if d_prime < 1:
        raise ValidationError(f"d' 必须为正，得到 {d_prime}")
    G = gaussian_matrix(d_prime, data.dim, rng)
    projected = np.asarray(data.points) @ G.T
    radius = clamp_radius(data.n)
    if data.n > 0:
        moved = int(np.sum(np.linalg.norm(projected, axis=1) > radius))
        if moved:
            logger.bind(stage="projection").warning(f"{moved} 个投影点超出 B(0, {radius:.4g})，已截断")
        projected = clamp_rows_to_ball(projected, radius)
    return Dataset.from_points(projected, data.weights, dim=d_prime)
