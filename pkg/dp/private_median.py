"""
私有几何中位数模块
噪声投影次梯度下降：F(c) = (1/m) * sum ||c - p_i||，1-Lipschitz 凸函数
"""

import math
from typing import Optional

import numpy as np
from loguru import logger

from config import config
from geometry import Point, clamp_to_ball
from utils.errors import ValidationError
from .budget import PrivacyBudget, BudgetLedger
from .mechanisms import gaussian_sigma
from .private_kmedian import check_inside_ball
from .rng import SeededRng


def unit_gradient(c: np.ndarray, points: np.ndarray) -> np.ndarray:
    """F 的次梯度；与 c 重合的点贡献 0"""
    diff = c - points
    norms = np.linalg.norm(diff, axis=1)
    keep = norms > 0
    g = np.zeros_like(c)
    if np.any(keep):
        g = (diff[keep] / norms[keep, None]).sum(axis=0)
    return g / points.shape[0]


def private_geometric_median(points, budget: PrivacyBudget, ball_radius: float,
                             rng: SeededRng, steps: Optional[int] = None,
                             tail_fraction: Optional[float] = None,
                             ledger: Optional[BudgetLedger] = None,
                             stage: str = "median") -> Point:
    """
    私有几何中位数

    T 步噪声次梯度下降，步长 ball_radius/sqrt(t)，每步加高斯噪声；
    噪声标准差按高斯机制在 T 步基本组合下校准（每步 eps/T, delta/T，L2 敏感度 2/m），
    迭代点投影回 B(0, ball_radius)，返回全部迭代点的平均；
    tail_fraction < 1 时只平均最后 tail_fraction 比例的迭代点

    Args:
        points: m×d 点集，位于 B(0, ball_radius) 内
        budget: 本次调用的预算，delta 必须为正
        ball_radius: 可行球半径
        rng: 随机流
        steps: 迭代步数 T
        tail_fraction: 参与平均的迭代比例，缺省 GM_TAIL_FRACTION（1.0）

    Returns:
        范数不超过 ball_radius 的中心
    """
    steps = config.GM_STEPS if steps is None else steps
    tail_fraction = config.GM_TAIL_FRACTION if tail_fraction is None else tail_fraction
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.shape[0] == 0:
        raise ValidationError("私有几何中位数需要非空点集")
    if budget.delta_p <= 0:
        raise ValidationError("高斯机制需要 delta_p > 0")
    if steps < 1 or not (0 < tail_fraction <= 1):
        raise ValidationError("steps 必须为正且 tail_fraction 在 (0, 1] 内")
    check_inside_ball(X, ball_radius, "点集")

    m, dim = X.shape
    sigma = gaussian_sigma(2.0 / m, budget.eps_p / steps, budget.delta_p / steps)

    c = np.zeros(dim)
    start = min(steps - 1, int(math.floor(steps * (1 - tail_fraction))))
    tail_sum = np.zeros(dim)
    for t in range(1, steps + 1):
        g = unit_gradient(c, X) + rng.normal(sigma, dim)
        c = clamp_to_ball(c - (ball_radius / math.sqrt(t)) * g, ball_radius)
        if t > start:
            tail_sum += c
    result = clamp_to_ball(tail_sum / (steps - start), ball_radius)

    if ledger is not None:
        ledger.charge(stage, budget.eps_p, budget.delta_p)
    logger.bind(stage=stage).debug(f"私有几何中位数: m={m}, T={steps}, sigma={sigma:.4g}")
    return result
