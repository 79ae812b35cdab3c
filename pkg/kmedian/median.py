"""
几何中位数模块
带权 Weiszfeld 迭代，迭代点落在数据点上时做次梯度最优性检验
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from config import config
from geometry import Point
from utils.errors import ValidationError

# 判定迭代点与数据点重合的距离
_COINCIDE_TOL = 1e-12
# 非最优数据点处的扰动步长
_PERTURB_STEP = 1e-6


@dataclass(frozen=True)
class WeiszfeldResult:
    """Weiszfeld 迭代结果"""
    median: Point
    objective: float
    trace: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def _prepare(points, weights) -> tuple:
    X = np.array(points, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValidationError("几何中位数需要非空点集")
    if not np.all(np.isfinite(X)):
        raise ValidationError("点坐标必须全部有限")
    if weights is None:
        w = np.ones(X.shape[0])
    else:
        w = np.array(weights, dtype=float).reshape(-1)
        if w.shape[0] != X.shape[0]:
            raise ValidationError("权重长度与点数不一致")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValidationError("权重必须是有限非负数")
    if w.sum() <= 0:
        raise ValidationError("总权重必须为正")
    return X, w


def median_objective(y: np.ndarray, X: np.ndarray, w: np.ndarray) -> float:
    """sum_i w_i * ||y - x_i||"""
    return float(np.dot(w, np.linalg.norm(X - y, axis=1)))


def median_gradient(y: np.ndarray, X: np.ndarray, w: np.ndarray) -> np.ndarray:
    """目标函数在非数据点处的梯度"""
    diff = y - X
    norms = np.linalg.norm(diff, axis=1)
    keep = norms > _COINCIDE_TOL
    return (w[keep, None] * diff[keep] / norms[keep, None]).sum(axis=0)


def _data_point_step(j: int, X: np.ndarray, w: np.ndarray) -> Optional[np.ndarray]:
    """
    数据点 x_j 处的次梯度检验

    Returns:
        x_j 最优时返回 None，否则返回沿下降方向扰动后的新起点
    """
    diff = X[j] - X
    norms = np.linalg.norm(diff, axis=1)
    here = norms <= _COINCIDE_TOL
    pull = (w[~here, None] * diff[~here] / norms[~here, None]).sum(axis=0)
    strength = float(np.linalg.norm(pull))
    if strength <= w[here].sum():
        return None
    return X[j] - _PERTURB_STEP * pull / strength


def weiszfeld(points, weights: Optional[Sequence[float]] = None,
              tol: Optional[float] = None, max_iter: Optional[int] = None) -> WeiszfeldResult:
    """
    Weiszfeld 迭代求带权几何中位数

    Args:
        points: m×d 点集
        weights: 非负权重，默认全 1
        tol: 目标函数改进小于 tol 时停止
        max_iter: 最大迭代次数

    Returns:
        WeiszfeldResult，trace 为逐次迭代的目标函数值（单调不增）
    """
    tol = config.WEISZFELD_TOL if tol is None else tol
    max_iter = config.WEISZFELD_MAX_ITER if max_iter is None else max_iter
    if tol <= 0:
        raise ValidationError("tol 必须为正")
    X, w = _prepare(points, weights)

    if X.shape[0] == 1 or np.all(X == X[0]):
        value = median_objective(X[0], X, w)
        return WeiszfeldResult(median=X[0].copy(), objective=value, trace=[value],
                               iterations=0, converged=True)

    y = (w[:, None] * X).sum(axis=0) / w.sum()
    value = median_objective(y, X, w)
    trace = [value]
    converged = False
    iterations = 0

    while iterations < max_iter:
        iterations += 1
        d = np.linalg.norm(X - y, axis=1)
        j = int(np.argmin(d))
        if d[j] < _COINCIDE_TOL:
            restart = _data_point_step(j, X, w)
            if restart is None:
                y = X[j].copy()
                value = median_objective(y, X, w)
                trace.append(value)
                converged = True
                break
            y = restart
            value = median_objective(y, X, w)
            trace.append(value)
            continue

        inv = w / d
        y_new = (inv[:, None] * X).sum(axis=0) / inv.sum()
        new_value = median_objective(y_new, X, w)
        improvement = value - new_value
        y, value = y_new, new_value
        trace.append(value)
        if improvement < tol:
            converged = True
            break

    # 最优点常恰好是某个数据点，迭代只能逼近它
    d = np.linalg.norm(X - y, axis=1)
    j = int(np.argmin(d))
    at_point = median_objective(X[j], X, w)
    if at_point <= value:
        y, value = X[j].copy(), at_point
        trace.append(value)

    if not converged:
        logger.debug(f"Weiszfeld 在 {max_iter} 次迭代内未收敛，目标值 {value:.6g}")
    return WeiszfeldResult(median=y, objective=value, trace=trace,
                           iterations=iterations, converged=converged)


def geometric_median(points, weights: Optional[Sequence[float]] = None,
                     tol: Optional[float] = None, max_iter: Optional[int] = None) -> Point:
    """带权几何中位数（1-median）"""
    return weiszfeld(points, weights, tol, max_iter).median
