"""
局部搜索模块
离散候选集上的单交换 k-median 局部搜索（贪心初始化 + 最优单交换）
"""

from typing import Optional, Tuple

import numpy as np
from loguru import logger

from config import config
from geometry import Dataset, CenterSet, distance_matrix, cost
from utils.errors import ValidationError
from .solver_result import SolverResult


def nearest_two(sub: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    每行的最近、次近距离及最近列下标

    Args:
        sub: n×k 距离矩阵

    Returns:
        (owner, d1, d2)；k = 1 时 d2 为 inf
    """
    n, k = sub.shape
    rows = np.arange(n)
    owner = np.argmin(sub, axis=1)
    d1 = sub[rows, owner]
    if k == 1:
        d2 = np.full(n, np.inf)
    else:
        masked = sub.copy()
        masked[rows, owner] = np.inf
        d2 = masked.min(axis=1)
    return owner, d1, d2


def swap_costs(D: np.ndarray, weights: np.ndarray, chosen: np.ndarray) -> np.ndarray:
    """
    所有单交换后的代价

    Args:
        D: n×C 点到候选的距离矩阵
        weights: 点权重
        chosen: 当前选中的 k 个候选下标

    Returns:
        k×C 矩阵，[j, c] 为把第 j 个中心换成候选 c 后的代价
    """
    owner, d1, d2 = nearest_two(D[:, chosen])
    base = weights @ np.minimum(d1[:, None], D)
    result = np.empty((chosen.shape[0], D.shape[1]))
    for j in range(chosen.shape[0]):
        own = owner == j
        if np.any(own):
            Dj = D[own]
            corr = weights[own] @ (np.minimum(d2[own, None], Dj) - np.minimum(d1[own, None], Dj))
            result[j] = base + corr
        else:
            result[j] = base
    return result


def greedy_init(D: np.ndarray, weights: np.ndarray, k: int) -> np.ndarray:
    """逐个加入使代价最小的候选"""
    chosen = []
    current = np.full(D.shape[0], np.inf)
    for _ in range(k):
        totals = weights @ np.minimum(current[:, None], D)
        totals[chosen] = np.inf
        best = int(np.argmin(totals))
        chosen.append(best)
        current = np.minimum(current, D[:, best])
    return np.array(chosen, dtype=int)


def local_search_kmedian(data: Dataset, k: int, candidates: CenterSet,
                         max_swaps: Optional[int] = None) -> SolverResult:
    """
    单交换局部搜索

    Args:
        data: 带权数据集
        k: 中心数
        candidates: 离散候选中心
        max_swaps: 最大交换次数

    Returns:
        SolverResult；每次交换使代价至少下降 (1 - 1e-6/k) 倍，结果不劣于贪心初始解
    """
    max_swaps = config.LOCAL_SEARCH_MAX_SWAPS if max_swaps is None else max_swaps
    if k < 1:
        raise ValidationError(f"k 必须为正，得到 {k}")
    if candidates.k < k:
        raise ValidationError(f"候选数 {candidates.k} 少于 k={k}")
    if data.n == 0:
        raise ValidationError("数据集为空")
    if data.dim != candidates.dim:
        raise ValidationError(f"数据维度 {data.dim} 与候选维度 {candidates.dim} 不一致")

    D = distance_matrix(data.points, candidates.centers)
    w = np.asarray(data.weights)
    chosen = greedy_init(D, w, k)
    current = float(w @ D[:, chosen].min(axis=1))
    factor = 1.0 - 1e-6 / k

    swaps = 0
    converged = False
    while swaps < max_swaps:
        if current <= 0:
            converged = True
            break
        table = swap_costs(D, w, chosen)
        table[:, chosen] = np.inf
        flat = int(np.argmin(table))
        j, c = divmod(flat, table.shape[1])
        if not table[j, c] <= current * factor:
            converged = True
            break
        chosen[j] = c
        current = float(w @ D[:, chosen].min(axis=1))
        swaps += 1

    centers = CenterSet.from_points(candidates.centers[chosen], dim=candidates.dim)
    final = cost(data, centers)
    logger.bind(stage="local_search").debug(
        f"局部搜索: k={k}, 候选 {candidates.k}, 交换 {swaps} 次, 代价 {final:.6g}"
    )
    return SolverResult(centers=centers, cost=final, iterations=swaps, converged=converged)
