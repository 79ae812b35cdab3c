"""
合成数据模块
分离良好的高斯混合与单位球均匀样本，均由 SeededRng 生成
"""

from typing import Tuple

import numpy as np

from dp import SeededRng
from geometry import Dataset, clamp_rows_to_ball
from utils.errors import ValidationError


def mixture_centers(dim: int, k: int, radius: float) -> np.ndarray:
    """簇心放在坐标轴上：第 j 个为 ±radius * e_{j mod d}，超过 d 个后取负方向"""
    if k > 2 * dim:
        raise ValidationError(f"坐标轴布局最多容纳 2d={2 * dim} 个簇，得到 k={k}")
    centers = np.zeros((k, dim))
    for j in range(k):
        centers[j, j % dim] = radius if j < dim else -radius
    return centers


def separated_mixture(n: int, dim: int, k: int, rng: SeededRng, radius: float = 0.8,
                      spread: float = 0.03) -> Tuple[Dataset, np.ndarray]:
    """
    k 个分离良好的高斯簇，点数轮流分配，结果截断到单位球

    Returns:
        (数据集, 每个点的簇标签)
    """
    if n < 1 or k < 1:
        raise ValidationError("n 和 k 必须为正")
    centers = mixture_centers(dim, k, radius)
    labels = np.arange(n) % k
    points = centers[labels] + spread * rng.standard_normal((n, dim))
    return Dataset.from_points(clamp_rows_to_ball(points, 1.0)), labels


def uniform_ball(n: int, dim: int, rng: SeededRng, radius: float = 1.0) -> Dataset:
    """B(0, radius) 内的均匀样本"""
    directions = rng.standard_normal((n, dim))
    norms = np.linalg.norm(directions, axis=1)
    norms[norms == 0] = 1.0
    radii = radius * rng.uniforms(n) ** (1.0 / dim)
    return Dataset.from_points(directions / norms[:, None] * radii[:, None], dim=dim)
